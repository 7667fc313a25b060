//! Acceptance gate: one test per shipped guarantee, each printing a
//! `ACCEPTANCE NN <name> PASS` line when it holds. Tolerances are part of
//! the contract and appear literally in the assertions.

use num_complex::Complex64;
use rand::Rng;
use std::f64::consts::PI;
use std::process::Command;

use subfourier::{
    analysis, oracle, verify, Moment, QuadratureSpec, SuperpositionState,
};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_subfourier"))
}

fn run_json(args: &[&str]) -> serde_json::Value {
    let out = bin().args(args).output().expect("binary runs");
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn criterion_01_normalization_closed_form() {
    // N agrees with [2 sqrt(2 pi) sigma (1 + eps)]^{-1/2} to 1e-12 relative.
    let sigma = std::f64::consts::FRAC_1_SQRT_2;
    for i in 0..20 {
        let alpha = 4.0 * i as f64 / 19.0;
        let s = SuperpositionState::cat(alpha, sigma, 0.0)
            .unwrap()
            .normalized()
            .unwrap();
        let closed = verify::cat_norm_closed(alpha, sigma);
        let rel = (s.norm_constant().unwrap() - closed).abs() / closed;
        assert!(rel <= 1e-12, "alpha {alpha}: rel {rel}");
    }
    println!("ACCEPTANCE 01 normalization-closed-form PASS");
}

#[test]
fn criterion_02_overlap_response() {
    // Closed-form response within 1e-8 relative (1e-12 absolute floor) of
    // quadrature, and the first zero satisfies cos(alpha delta*) = -eps.
    let spec = QuadratureSpec::default();
    let mut rng = verify::seeded_rng(2);
    for _ in 0..50 {
        let (alpha, sigma, k) = verify::sample_cat(&mut rng);
        let s = SuperpositionState::cat(alpha, sigma, k)
            .unwrap()
            .normalized()
            .unwrap();
        let delta = rng.gen_range(0.0..3.0 / sigma);
        let closed = analysis::overlap_response(&s, delta).unwrap();
        let q = oracle::numeric_overlap(&s.displaced(0.0, delta), &s, &spec)
            .unwrap()
            .value;
        let err = (closed - q).norm();
        assert!(
            err <= 1e-12f64.max(1e-8 * q.norm()),
            "alpha {alpha} sigma {sigma} delta {delta}: err {err:e}"
        );
    }
    for (alpha, sigma) in [(2.0, 1.0), (3.0, 1.0), (4.0, 1.0), (2.5, 0.8)] {
        let s = SuperpositionState::cat(alpha, sigma, 0.0)
            .unwrap()
            .normalized()
            .unwrap();
        let hit = analysis::find_delta_star(&s, analysis::auto_k_max(&s)).unwrap();
        let eps = verify::cat_epsilon(alpha, sigma);
        let condition = ((alpha * hit.delta_star).cos() + eps).abs();
        assert!(condition < 1e-10, "alpha {alpha}: |cos + eps| = {condition:e}");
    }
    println!("ACCEPTANCE 02 overlap-response PASS");
}

#[test]
fn criterion_03_position_width() {
    // Assembled position width within 1e-9 relative of quadrature moments
    // across the whole separation range.
    let spec = QuadratureSpec::default();
    for sigma in [0.7, 1.0] {
        for r in [0.0, 0.5, 1.0, 2.0, 4.0, 8.0] {
            let alpha = r * sigma;
            let s = SuperpositionState::cat(alpha, sigma, 0.0)
                .unwrap()
                .normalized()
                .unwrap();
            let dx = analysis::uncertainty_x(&s).unwrap();
            let x1 = oracle::numeric_moment(&s, Moment::X, &spec).unwrap().value.re;
            let x2 = oracle::numeric_moment(&s, Moment::X2, &spec).unwrap().value.re;
            let numeric = (x2 - x1 * x1).sqrt();
            let rel = (dx - numeric).abs() / numeric;
            assert!(rel <= 1e-9, "r {r} sigma {sigma}: rel {rel:e}");
        }
    }
    println!("ACCEPTANCE 03 position-width PASS");
}

#[test]
fn criterion_04_wavenumber_width_adjudication() {
    // The assembled squared width matches quadrature to 1e-8 on every row;
    // both rival closed forms miss by more than 1e-3 somewhere; the shipped
    // verify command reports the same conclusion.
    let spec = QuadratureSpec::default();
    let mut worst_assembled = 0.0f64;
    let mut worst_a = 0.0f64;
    let mut worst_b = 0.0f64;
    for r in [0.0f64, 0.5, 1.0, 2.0, 4.0, 8.0] {
        let s = SuperpositionState::cat(r, 1.0, 0.0).unwrap().normalized().unwrap();
        let k1 = oracle::numeric_moment(&s, Moment::K, &spec).unwrap().value.re;
        let k2 = oracle::numeric_moment(&s, Moment::K2, &spec).unwrap().value.re;
        let numeric = k2 - k1 * k1;
        let dk = analysis::uncertainty_k(&s).unwrap();
        worst_assembled = worst_assembled.max((dk * dk - numeric).abs() / numeric);
        worst_a = worst_a.max((verify::delta_k_sq_candidate_a(r, 1.0) - numeric).abs() / numeric);
        worst_b = worst_b.max((verify::delta_k_sq_candidate_b(r, 1.0) - numeric).abs() / numeric);
    }
    assert!(worst_assembled <= 1e-8, "assembled off by {worst_assembled:e}");
    assert!(worst_a > 1e-3, "candidate_a survived: {worst_a:e}");
    assert!(worst_b > 1e-3, "candidate_b survived: {worst_b:e}");

    let out = bin().arg("verify").output().expect("binary runs");
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("check delta_k_adjudication PASS"));
    assert!(text.contains("survivor: assembled"));
    assert!(text.contains("verify PASS"));
    println!("ACCEPTANCE 04 wavenumber-width-adjudication PASS");
}

#[test]
fn criterion_05_heisenberg_floor() {
    // 100 random superpositions stay at or above hbar/2 (to 1e-12), and the
    // merged cat sits on the floor exactly.
    let mut rng = verify::seeded_rng(5);
    for _ in 0..100 {
        let s = verify::sample_state(&mut rng);
        let rep = analysis::uncertainty_report(&s).unwrap();
        assert!(
            rep.product >= 0.5 * s.hbar() - 1e-12,
            "product {} below the floor",
            rep.product
        );
    }
    let merged = SuperpositionState::cat(0.0, 1.1, 0.7)
        .unwrap()
        .normalized()
        .unwrap();
    let rep = analysis::uncertainty_report(&merged).unwrap();
    assert!((rep.product - 0.5).abs() <= 1e-12);
    println!("ACCEPTANCE 05 heisenberg-floor PASS");
}

#[test]
fn criterion_06_reference_scenarios() {
    // (a) the laboratory reference: shift 3.3 against width 4.0 -> 0.825
    let v = run_json(&[
        "report", "--state", "cat", "--alpha", "3.3", "--sigma", "1.0",
        "--units", "thz", "--ref-delta", "3.3", "--ref-width", "4.0",
    ]);
    assert_eq!(v["units"], "thz");
    let rr = v["reference_ratio"].as_f64().unwrap();
    assert!((rr - 0.825).abs() < 1e-15, "reference_ratio {rr}");

    // (b) cat(4, 1, 0): the shift sits within 5% of pi/8 and inside the width
    let v = run_json(&["report", "--state", "cat", "--alpha", "4.0", "--sigma", "1.0"]);
    let delta_star = v["delta_star"].as_f64().unwrap();
    assert!((delta_star - PI / 8.0).abs() / (PI / 8.0) < 0.05);
    assert!(v["subfourier"].as_bool().unwrap());
    assert!(v["ratio"].as_f64().unwrap() < 1.0);

    // (c) the regime boundary is a single onset: once sub-Fourier, always
    let rows = analysis::regime_scan((0.1, 6.0), 1.0, 60).unwrap();
    let first = rows.iter().position(|r| r.subfourier).expect("onset exists");
    assert!(first > 0, "small separations must not be sub-Fourier");
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(
            row.subfourier,
            i >= first,
            "regime not contiguous at row {i} (alpha/sigma {})",
            row.alpha_over_sigma
        );
    }
    println!("ACCEPTANCE 06 reference-scenarios PASS");
}

#[test]
fn criterion_07_ladder_residuals() {
    // Matched packets are ladder eigenstates to 1e-12; a separated cat
    // never is (residual above 0.1 at its own separation).
    for alpha in [0.0, 0.7, 2.5, 5.0] {
        let r = oracle::eigen_residual(alpha).unwrap();
        assert!(r < 1e-12, "alpha {alpha}: residual {r:e}");
    }
    let cat = SuperpositionState::cat(1.5, std::f64::consts::FRAC_1_SQRT_2, 0.0)
        .unwrap()
        .normalized()
        .unwrap();
    let r = oracle::eigen_residual_for(&cat, Complex64::new(1.5, 0.0));
    assert!(r > 0.1, "cat residual {r}");
    println!("ACCEPTANCE 07 ladder-residuals PASS");
}

#[test]
fn criterion_08_fourier_widths() {
    // Discrete-Fourier widths reproduce the closed forms to 1e-6 for ten
    // states; single packets give the exact minimum product.
    let states = [
        SuperpositionState::coherent(0.8, 0.9, 1.3).unwrap(),
        SuperpositionState::coherent(0.0, 1.0, 0.0).unwrap(),
        SuperpositionState::coherent(-1.2, 1.4, -2.0).unwrap(),
        SuperpositionState::cat(1.0, 1.0, 0.0).unwrap(),
        SuperpositionState::cat(2.0, 1.0, 0.0).unwrap(),
        SuperpositionState::cat(4.0, 1.0, 0.5).unwrap(),
        SuperpositionState::cat(1.5, 0.7, 0.8).unwrap(),
        SuperpositionState::cat(3.0, 1.2, -1.0).unwrap(),
        SuperpositionState::compass(2.0, 1.0).unwrap(),
        SuperpositionState::compass(3.0, 0.8).unwrap(),
    ];
    for (i, state) in states.into_iter().enumerate() {
        let single_packet = state.components().len() == 1;
        let s = state.normalized().unwrap();
        let rep = analysis::uncertainty_report(&s).unwrap();
        let w = oracle::discrete_fourier_widths(&s, 16.0, 4096).unwrap();
        let rel_x = (w.delta_x - rep.delta_x).abs() / rep.delta_x;
        let rel_k = (w.delta_k - rep.delta_k).abs() / rep.delta_k;
        assert!(rel_x <= 1e-6, "state {i}: delta_x rel {rel_x:e}");
        assert!(rel_k <= 1e-6, "state {i}: delta_k rel {rel_k:e}");
        if single_packet {
            assert!((w.delta_x * w.delta_k - 0.5).abs() <= 1e-6);
        }
    }
    println!("ACCEPTANCE 08 fourier-widths PASS");
}

#[test]
fn criterion_09_wigner_maps() {
    // 512x512 maps: unit mass to 1e-4 and both marginals to 1e-6.
    let transform_density = |s: &SuperpositionState, k: f64| -> f64 {
        let sigma = s.sigma();
        let mut ft = Complex64::new(0.0, 0.0);
        for c in s.components() {
            let dk = k - c.carrier;
            ft += c.amplitude
                * 2.0
                * PI.sqrt()
                * sigma
                * (-sigma * sigma * dk * dk).exp()
                * Complex64::from_polar(1.0, -dk * c.center);
        }
        (s.norm_constant().unwrap() * ft).norm_sqr() / (2.0 * PI)
    };

    let cases = [
        (
            SuperpositionState::cat(3.0, 1.0, 0.0).unwrap().normalized().unwrap(),
            (-12.0, 12.0),
            (-4.5, 4.5),
        ),
        (
            SuperpositionState::compass(4.0, 1.0).unwrap().normalized().unwrap(),
            (-13.0, 13.0),
            (-6.5, 6.5),
        ),
    ];
    for (s, x_range, k_range) in cases {
        let g = analysis::wigner_grid(&s, x_range, k_range, 512, 512).unwrap();
        assert!((g.integral() - 1.0).abs() <= 1e-4, "mass {}", g.integral());
        let mx = g.marginal_x();
        for (i, &x) in g.xs().iter().enumerate() {
            let err = (mx[i] - s.evaluate(x).norm_sqr()).abs();
            assert!(err <= 1e-6, "x marginal off by {err:e} at {x}");
        }
        let mk = g.marginal_k();
        for (j, &k) in g.ks().iter().enumerate() {
            let err = (mk[j] - transform_density(&s, k)).abs();
            assert!(err <= 1e-6, "k marginal off by {err:e} at {k}");
        }
    }
    println!("ACCEPTANCE 09 wigner-maps PASS");
}

#[test]
fn criterion_10_scan_determinism() {
    // Two runs of the same sweep are byte-identical.
    let args = [
        "scan", "--ratio-min", "0.1", "--ratio-max", "6.0", "--steps", "60",
        "--sigma", "1.0",
    ];
    let a = bin().args(args).output().expect("binary runs");
    let b = bin().args(args).output().expect("binary runs");
    assert!(a.status.success() && b.status.success());
    assert!(!a.stdout.is_empty());
    assert_eq!(a.stdout, b.stdout, "scan output must be deterministic");
    println!("ACCEPTANCE 10 scan-determinism PASS");
}
