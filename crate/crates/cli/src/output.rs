//! Text renderers. Every number is printed with 17 significant digits so
//! values round-trip through the output exactly; all layouts are fixed so
//! identical inputs produce byte-identical output.

use subfourier::analysis::ScanRow;
use subfourier::verify::VerifyReport;
use subfourier::WignerGrid;

/// `f64` with enough digits to round-trip (one leading + 16 fractional).
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Everything the `report` command prints.
pub struct ReportView {
    pub state: &'static str,
    pub alpha: f64,
    pub sigma: f64,
    pub carrier: f64,
    pub hbar: f64,
    pub units: &'static str,
    pub cyclic: bool,
    pub delta_x: f64,
    pub delta_k: f64,
    pub delta_p: f64,
    pub product: f64,
    pub mean_x: f64,
    pub mean_p: f64,
    pub k_max: f64,
    /// `None` when the search exhausted its range without a zero.
    pub root: Option<RootView>,
    pub reference_ratio: Option<f64>,
}

pub struct RootView {
    pub delta_star: f64,
    pub residual: f64,
    pub ratio: f64,
    pub subfourier: bool,
}

fn push_kv_f64(out: &mut String, key: &str, v: f64) {
    out.push_str("  \"");
    out.push_str(key);
    out.push_str("\": ");
    out.push_str(&fmt_f64(v));
    out.push_str(",\n");
}

fn push_kv_str(out: &mut String, key: &str, v: &str) {
    out.push_str("  \"");
    out.push_str(key);
    out.push_str("\": \"");
    out.push_str(v);
    out.push_str("\",\n");
}

/// Hand-assembled JSON with a fixed key order. Root fields hold either a
/// number or the string `"no_root"`; `reference_ratio` appears only when a
/// reference was supplied.
pub fn report_json(view: &ReportView) -> String {
    let mut out = String::with_capacity(1024);
    out.push_str("{\n");
    push_kv_str(&mut out, "state", view.state);
    push_kv_f64(&mut out, "alpha", view.alpha);
    push_kv_f64(&mut out, "sigma", view.sigma);
    push_kv_f64(&mut out, "carrier", view.carrier);
    push_kv_f64(&mut out, "hbar", view.hbar);
    push_kv_str(&mut out, "units", view.units);
    out.push_str("  \"cyclic\": ");
    out.push_str(if view.cyclic { "true" } else { "false" });
    out.push_str(",\n");
    push_kv_f64(&mut out, "delta_x", view.delta_x);
    push_kv_f64(&mut out, "delta_k", view.delta_k);
    push_kv_f64(&mut out, "delta_p", view.delta_p);
    push_kv_f64(&mut out, "product", view.product);
    push_kv_f64(&mut out, "mean_x", view.mean_x);
    push_kv_f64(&mut out, "mean_p", view.mean_p);
    push_kv_f64(&mut out, "k_max", view.k_max);
    match &view.root {
        Some(root) => {
            push_kv_f64(&mut out, "delta_star", root.delta_star);
            push_kv_f64(&mut out, "residual", root.residual);
            push_kv_f64(&mut out, "ratio", root.ratio);
            out.push_str("  \"subfourier\": ");
            out.push_str(if root.subfourier { "true" } else { "false" });
        }
        None => {
            push_kv_str(&mut out, "delta_star", "no_root");
            push_kv_str(&mut out, "residual", "no_root");
            push_kv_str(&mut out, "ratio", "no_root");
            out.push_str("  \"subfourier\": false");
        }
    }
    if let Some(r) = view.reference_ratio {
        out.push_str(",\n");
        out.push_str("  \"reference_ratio\": ");
        out.push_str(&fmt_f64(r));
    }
    out.push_str("\n}\n");
    out
}

/// CSV rows of a regime scan; missing roots print as `NA`.
pub fn scan_csv(rows: &[ScanRow]) -> String {
    let mut out = String::with_capacity(rows.len() * 140 + 80);
    out.push_str("alpha_over_sigma,delta_x,delta_k,delta_star,ratio,product,subfourier\n");
    for r in rows {
        out.push_str(&fmt_f64(r.alpha_over_sigma));
        out.push(',');
        out.push_str(&fmt_f64(r.delta_x));
        out.push(',');
        out.push_str(&fmt_f64(r.delta_k));
        out.push(',');
        match r.delta_star {
            Some(d) => out.push_str(&fmt_f64(d)),
            None => out.push_str("NA"),
        }
        out.push(',');
        match r.ratio {
            Some(t) => out.push_str(&fmt_f64(t)),
            None => out.push_str("NA"),
        }
        out.push(',');
        out.push_str(&fmt_f64(r.product));
        out.push(',');
        out.push_str(if r.subfourier { "true" } else { "false" });
        out.push('\n');
    }
    out
}

/// CSV dump of a Wigner map, x-major.
pub fn wigner_csv(grid: &WignerGrid) -> String {
    let mut out = String::with_capacity(grid.xs().len() * grid.ks().len() * 60 + 16);
    out.push_str("x,k,w\n");
    for (i, &x) in grid.xs().iter().enumerate() {
        for (j, &k) in grid.ks().iter().enumerate() {
            out.push_str(&fmt_f64(x));
            out.push(',');
            out.push_str(&fmt_f64(k));
            out.push(',');
            out.push_str(&fmt_f64(grid.values()[(i, j)]));
            out.push('\n');
        }
    }
    out
}

/// Human-readable verification transcript: one line per check, the
/// squared-width adjudication table, and a final verdict line.
pub fn verify_text(report: &VerifyReport) -> String {
    let mut out = String::with_capacity(4096);
    out.push_str(&format!("seed {}\n", report.seed));
    out.push_str(&format!(
        "perturb_kernel {}\n\n",
        fmt_f64(report.perturb_kernel)
    ));
    for c in &report.checks {
        out.push_str(&format!(
            "check {} {} worst {} threshold {}\n    {}\n",
            c.name,
            if c.passed { "PASS" } else { "FAIL" },
            fmt_f64(c.worst),
            fmt_f64(c.threshold),
            c.detail
        ));
    }
    out.push_str("\nsquared wavenumber width, quadrature vs closed forms (sigma = 1)\n");
    out.push_str("alpha_over_sigma,numeric,assembled,candidate_a,candidate_b\n");
    for row in &report.delta_k_rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt_f64(row.alpha_over_sigma),
            fmt_f64(row.numeric),
            fmt_f64(row.assembled),
            fmt_f64(row.candidate_a),
            fmt_f64(row.candidate_b)
        ));
    }
    let adjudicated = report
        .checks
        .iter()
        .any(|c| c.name == "delta_k_adjudication" && c.passed);
    out.push_str(if adjudicated {
        "survivor: assembled\n\n"
    } else {
        "survivor: none confirmed\n\n"
    });
    out.push_str(if report.passed {
        "verify PASS\n"
    } else {
        "verify FAIL\n"
    });
    out
}
