//! End-to-end checks of the binary: output formats, flag handling, and the
//! exit-code contract (0 ok, 1 verify failure, 2 missing root under
//! --require-root, 64 usage, 65 invalid parameters, 74 unwritable output).

use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_subfourier"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 stderr")
}

#[test]
fn report_emits_frozen_values_as_json() {
    let out = run(&["report", "--state", "cat", "--alpha", "2.0", "--sigma", "1.0"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let v: serde_json::Value = serde_json::from_str(&text).expect("valid JSON");

    assert_eq!(v["state"], "cat");
    assert_eq!(v["units"], "natural");
    assert_eq!(v["cyclic"], false);
    assert!((v["delta_x"].as_f64().unwrap() - 2.1267788582529049).abs() < 1e-14);
    assert!((v["delta_k"].as_f64().unwrap() - 0.36165878667313262).abs() < 1e-14);
    assert!((v["delta_star"].as_f64().unwrap() - 0.85327408898994206).abs() < 1e-12);
    assert!((v["ratio"].as_f64().unwrap() - 2.359334600547481).abs() < 1e-12);
    assert_eq!(v["subfourier"], false);

    // key order is part of the format
    let keys = [
        "\"state\"", "\"alpha\"", "\"sigma\"", "\"carrier\"", "\"hbar\"",
        "\"units\"", "\"cyclic\"", "\"delta_x\"", "\"delta_k\"", "\"delta_p\"",
        "\"product\"", "\"mean_x\"", "\"mean_p\"", "\"k_max\"", "\"delta_star\"",
        "\"residual\"", "\"ratio\"", "\"subfourier\"",
    ];
    let mut last = 0;
    for key in keys {
        let pos = text.find(key).unwrap_or_else(|| panic!("missing {key}"));
        assert!(pos > last, "{key} out of order");
        last = pos;
    }
}

#[test]
fn report_without_root_says_so_and_keeps_the_widths() {
    let out = run(&["report", "--state", "cat", "--alpha", "0.0"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["delta_star"], "no_root");
    assert_eq!(v["residual"], "no_root");
    assert_eq!(v["ratio"], "no_root");
    assert_eq!(v["subfourier"], false);
    assert!((v["product"].as_f64().unwrap() - 0.5).abs() < 1e-12);
}

#[test]
fn require_root_exits_two_when_there_is_none() {
    let out = run(&["report", "--state", "cat", "--alpha", "0.0", "--require-root"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("no orthogonality shift"));
}

#[test]
fn cyclic_units_divide_the_wavenumbers_but_not_the_ratio() {
    let plain = run(&["report", "--state", "cat", "--alpha", "4.0"]);
    let cyclic = run(&["report", "--state", "cat", "--alpha", "4.0", "--units-cyclic"]);
    let p: serde_json::Value = serde_json::from_str(&stdout(&plain)).unwrap();
    let c: serde_json::Value = serde_json::from_str(&stdout(&cyclic)).unwrap();
    assert_eq!(c["cyclic"], true);
    let tau = std::f64::consts::TAU;
    for field in ["delta_k", "delta_p", "delta_star"] {
        let want = p[field].as_f64().unwrap() / tau;
        let got = c[field].as_f64().unwrap();
        assert!((got - want).abs() < 1e-15, "{field}: {got} vs {want}");
    }
    assert_eq!(p["delta_x"], c["delta_x"]);
    assert_eq!(p["ratio"], c["ratio"]);
    assert_eq!(p["subfourier"], c["subfourier"]);
}

#[test]
fn ref_flags_must_come_together() {
    let out = run(&["report", "--ref-delta", "3.3"]);
    assert_eq!(out.status.code(), Some(64));
    assert!(stderr(&out).contains("--ref-width"));
}

#[test]
fn compass_rejects_a_carrier() {
    let out = run(&["report", "--state", "compass", "--carrier", "1.0"]);
    assert_eq!(out.status.code(), Some(65));
    assert!(stderr(&out).contains("compass states take no carrier"));
}

#[test]
fn invalid_parameters_exit_sixty_five() {
    for args in [
        ["report", "--sigma=-1.0"].as_slice(),
        ["report", "--sigma", "0.0"].as_slice(),
        ["scan", "--steps", "1"].as_slice(),
        ["scan", "--ratio-min", "0.0"].as_slice(),
        ["scan", "--ratio-min", "2.0", "--ratio-max", "1.0"].as_slice(),
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(65), "args {args:?}: {}", stderr(&out));
    }
}

#[test]
fn usage_errors_exit_sixty_four() {
    for args in [
        ["frobnicate"].as_slice(),
        ["report", "--state", "banana"].as_slice(),
        ["report", "--alpha", "lots"].as_slice(),
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(64), "args {args:?}");
    }
    let help = run(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
    assert!(stdout(&help).contains("subfourier"));
}

#[test]
fn scan_csv_has_a_fixed_shape() {
    let out = run(&[
        "scan", "--ratio-min", "0.5", "--ratio-max", "5.0", "--steps", "10",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "alpha_over_sigma,delta_x,delta_k,delta_star,ratio,product,subfourier"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 10);
    for row in &rows {
        assert_eq!(row.split(',').count(), 7, "row {row}");
        let flag = row.rsplit(',').next().unwrap();
        assert!(flag == "true" || flag == "false", "flag {flag}");
    }
    // ratios decrease with separation once fringes sharpen
    let first: f64 = rows[0].split(',').nth(4).unwrap().parse().unwrap();
    let last: f64 = rows[9].split(',').nth(4).unwrap().parse().unwrap();
    assert!(first > 1.0 && last < 1.0);
}

#[test]
fn wigner_csv_covers_the_grid() {
    let out = run(&[
        "wigner", "--state", "cat", "--alpha", "2.0", "--nx", "96", "--nk", "96",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "x,k,w");
    assert_eq!(lines.count(), 96 * 96);
}

#[test]
fn coarse_wigner_grid_is_refused_with_a_hint() {
    let out = run(&["wigner", "--state", "cat", "--alpha", "2.0", "--nx", "32"]);
    assert_eq!(out.status.code(), Some(65));
    let err = stderr(&out);
    assert!(err.contains("grid too coarse"), "stderr: {err}");
    assert!(err.contains("need nx >="), "stderr: {err}");
}

#[test]
fn verify_reports_every_check_and_fails_loudly_when_perturbed() {
    let clean = run(&["verify", "--seed", "11"]);
    assert_eq!(clean.status.code(), Some(0));
    let text = stdout(&clean);
    for name in [
        "pair_kernel_vs_quadrature",
        "normalization_constant",
        "normalization_quadrature",
        "delta_x_assembled_vs_closed",
        "delta_x_vs_quadrature",
        "delta_k_adjudication",
        "product_candidate_rejected",
        "overlap_response_vs_quadrature",
        "ladder_residual_packets",
        "ladder_residual_flags_cat",
        "fourier_widths",
        "heisenberg_floor",
        "heisenberg_equality",
    ] {
        assert!(text.contains(&format!("check {name} PASS")), "missing {name}");
    }
    assert!(text.trim_end().ends_with("verify PASS"));

    let hurt = run(&["verify", "--seed", "11", "--perturb-kernel", "1e-3"]);
    assert_eq!(hurt.status.code(), Some(1));
    let text = stdout(&hurt);
    assert!(text.contains("check pair_kernel_vs_quadrature FAIL"));
    assert!(text.trim_end().ends_with("verify FAIL"));
}

#[test]
fn outputs_are_deterministic_and_file_writing_works() {
    let a = run(&["report", "--state", "compass", "--alpha", "4.0"]);
    let b = run(&["report", "--state", "compass", "--alpha", "4.0"]);
    assert_eq!(a.stdout, b.stdout);

    let dir = std::env::temp_dir();
    let path = dir.join("subfourier_cli_io_report.json");
    let _ = std::fs::remove_file(&path);
    let out = bin()
        .args(["report", "--state", "compass", "--alpha", "4.0", "--out"])
        .arg(&path)
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let written = std::fs::read(&path).expect("file written");
    assert_eq!(written, a.stdout);
    let _ = std::fs::remove_file(&path);

    let bad = bin()
        .args(["report", "--out"])
        .arg(dir.join("no_such_dir").join("x.json"))
        .output()
        .expect("binary runs");
    assert_eq!(bad.status.code(), Some(74));
}
