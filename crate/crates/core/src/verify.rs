//! End-to-end verification: every closed form the crate ships is compared
//! against the quadrature oracle, and the wavenumber-width formula is
//! adjudicated against two plausible-looking rival expressions that fail.
//!
//! The suite is deterministic for a fixed seed. `perturb_kernel` injects a
//! relative error into the closed-form kernel comparison (and nothing else),
//! which lets callers confirm that the suite actually has teeth.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::FRAC_1_SQRT_2;

use crate::analysis;
use crate::error::Result;
use crate::kernels::{pair_overlap, PairKey};
use crate::oracle::{self, Moment, QuadratureSpec};
use crate::states::{GaussianComponent, SuperpositionState};

/// One named comparison with its worst observed value and pass bound.
/// `detail` states the metric and the direction of the comparison.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub worst: f64,
    pub threshold: f64,
    pub detail: String,
}

/// One row of the wavenumber-width adjudication table: the squared width by
/// quadrature next to the assembled closed form and the two rejected rivals.
#[derive(Debug, Clone, Copy)]
pub struct DeltaKRow {
    pub alpha_over_sigma: f64,
    pub numeric: f64,
    pub assembled: f64,
    pub candidate_a: f64,
    pub candidate_b: f64,
}

/// Full suite outcome.
#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub seed: u64,
    pub perturb_kernel: f64,
    pub checks: Vec<Check>,
    pub delta_k_rows: Vec<DeltaKRow>,
    pub passed: bool,
}

/// Deterministic generator used by every randomized check.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Cross-term weight of a cat state: `exp(-alpha^2 / (2 sigma^2))`.
pub fn cat_epsilon(alpha: f64, sigma: f64) -> f64 {
    (-alpha * alpha / (2.0 * sigma * sigma)).exp()
}

/// Closed-form normalization constant of `cat(alpha, sigma, k)`.
pub fn cat_norm_closed(alpha: f64, sigma: f64) -> f64 {
    let eps = cat_epsilon(alpha, sigma);
    1.0 / (2.0 * (2.0 * std::f64::consts::PI).sqrt() * sigma * (1.0 + eps)).sqrt()
}

/// Closed-form position width of a cat state.
pub fn cat_delta_x_closed(alpha: f64, sigma: f64) -> f64 {
    let eps = cat_epsilon(alpha, sigma);
    (sigma * sigma + alpha * alpha / (1.0 + eps)).sqrt()
}

/// Closed-form squared wavenumber width of a cat state; the survivor of the
/// adjudication below.
pub fn cat_delta_k_sq_closed(alpha: f64, sigma: f64) -> f64 {
    let eps = cat_epsilon(alpha, sigma);
    let s2 = sigma * sigma;
    1.0 / (4.0 * s2) - alpha * alpha * eps / (4.0 * s2 * s2 * (1.0 + eps))
}

/// Rival squared-width expression that drops the packet-width floor down to
/// `1/(2 sigma^2)`; twice the true value at `alpha = 0`.
pub fn delta_k_sq_candidate_a(alpha: f64, sigma: f64) -> f64 {
    let eps = cat_epsilon(alpha, sigma);
    let s2 = sigma * sigma;
    1.0 / (2.0 * s2) - alpha * alpha * eps / (4.0 * s2 * (1.0 + eps))
}

/// Rival squared-width expression missing the cross-term weight on the
/// interference correction; turns negative for well-separated packets.
pub fn delta_k_sq_candidate_b(alpha: f64, sigma: f64) -> f64 {
    let eps = cat_epsilon(alpha, sigma);
    let s2 = sigma * sigma;
    1.0 / (4.0 * s2) - alpha * alpha / (4.0 * s2 * s2 * (1.0 + eps))
}

/// Rival closed form for the full uncertainty product, built on the inverse
/// cross-term weight; disagrees with quadrature at every finite separation.
pub fn product_candidate(alpha: f64, sigma: f64) -> f64 {
    let big_e = 1.0 / cat_epsilon(alpha, sigma);
    let s2 = sigma * sigma;
    let one_e = 1.0 + big_e;
    (s2 * s2 * one_e * one_e - alpha.powi(4)).sqrt() / (2.0 * s2 * one_e)
}

/// Closed-form momentum-displacement response of a cat state.
pub fn cat_overlap_closed(alpha: f64, sigma: f64, delta: f64) -> f64 {
    let eps = cat_epsilon(alpha, sigma);
    (-sigma * sigma * delta * delta / 2.0).exp() * ((alpha * delta).cos() + eps) / (1.0 + eps)
}

/// Random cat parameters: `(alpha, sigma, k)`.
pub fn sample_cat(rng: &mut ChaCha8Rng) -> (f64, f64, f64) {
    (
        rng.gen_range(0.0..4.0),
        rng.gen_range(0.4..1.6),
        rng.gen_range(-3.0..3.0),
    )
}

/// Random normalized superposition of 1..=4 packets.
pub fn sample_state(rng: &mut ChaCha8Rng) -> SuperpositionState {
    loop {
        let n = rng.gen_range(1..=4usize);
        let sigma = rng.gen_range(0.4..1.8);
        let comps: Vec<GaussianComponent> = (0..n)
            .map(|_| {
                GaussianComponent::new(
                    rng.gen_range(-3.0..3.0),
                    rng.gen_range(-4.0..4.0),
                    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                )
            })
            .collect();
        let Ok(state) = SuperpositionState::new(comps, sigma) else {
            continue;
        };
        // Random amplitudes can cancel; resample instead of failing.
        if let Ok(s) = state.normalized() {
            return s;
        }
    }
}

fn check_pair_kernels(rng: &mut ChaCha8Rng, perturb: f64, spec: &QuadratureSpec) -> Result<Check> {
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let sigma = rng.gen_range(0.3..2.0);
        let (a, b) = (rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let (ka, kb) = (rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0));
        let closed = pair_overlap(&PairKey::new(a, b, ka, kb, sigma)) * (1.0 + perturb);
        let one = Complex64::new(1.0, 0.0);
        let bra = SuperpositionState::new(vec![GaussianComponent::new(a, ka, one)], sigma)?;
        let ket = SuperpositionState::new(vec![GaussianComponent::new(b, kb, one)], sigma)?;
        let q = oracle::numeric_overlap(&bra, &ket, spec)?.value;
        let err = (closed - q).norm();
        let bound = 1e-12f64.max(1e-9 * q.norm());
        worst = worst.max(err / bound);
    }
    Ok(Check {
        name: "pair_kernel_vs_quadrature",
        passed: worst <= 1.0,
        worst,
        threshold: 1.0,
        detail: "max |closed - quadrature| / max(1e-12, 1e-9 |quadrature|) over 200 \
                 random packet pairs"
            .into(),
    })
}

fn check_norm_constant() -> Result<Check> {
    let mut worst = 0.0f64;
    for sigma in [FRAC_1_SQRT_2, 1.3] {
        for i in 0..20 {
            let alpha = sigma * 4.0 * i as f64 / 19.0;
            let s = SuperpositionState::cat(alpha, sigma, 0.0)?.normalized()?;
            let closed = cat_norm_closed(alpha, sigma);
            let rel = (s.norm_constant().unwrap() - closed).abs() / closed;
            worst = worst.max(rel);
        }
    }
    Ok(Check {
        name: "normalization_constant",
        passed: worst <= 1e-12,
        worst,
        threshold: 1e-12,
        detail: "max relative error of the Gram-assembled constant against the \
                 closed form over 40 cat states"
            .into(),
    })
}

fn check_norm_quadrature(spec: &QuadratureSpec) -> Result<Check> {
    let mut worst = 0.0f64;
    for alpha in [0.0, 0.7, 1.4, 2.4, 4.0] {
        let s = SuperpositionState::cat(alpha, FRAC_1_SQRT_2, 0.6)?.normalized()?;
        let q = oracle::numeric_overlap(&s, &s, spec)?.value;
        worst = worst.max((q.re - 1.0).abs().max(q.im.abs()));
    }
    Ok(Check {
        name: "normalization_quadrature",
        passed: worst <= 1e-10,
        worst,
        threshold: 1e-10,
        detail: "max |∫|psi|^2 dx - 1| over 5 normalized cat states".into(),
    })
}

fn check_delta_x_closed() -> Result<Check> {
    let mut worst = 0.0f64;
    for sigma in [FRAC_1_SQRT_2, 1.0, 1.7] {
        for r in [0.0, 0.5, 1.0, 2.0, 4.0, 8.0] {
            let alpha = r * sigma;
            let s = SuperpositionState::cat(alpha, sigma, 0.4)?.normalized()?;
            let assembled = analysis::uncertainty_x(&s)?;
            let closed = cat_delta_x_closed(alpha, sigma);
            worst = worst.max((assembled - closed).abs() / closed);
        }
    }
    Ok(Check {
        name: "delta_x_assembled_vs_closed",
        passed: worst <= 1e-12,
        worst,
        threshold: 1e-12,
        detail: "max relative gap between kernel-assembled and closed-form \
                 position widths over 18 cat states"
            .into(),
    })
}

fn check_delta_x_quadrature(spec: &QuadratureSpec) -> Result<Check> {
    let mut worst = 0.0f64;
    for (alpha, sigma, k) in [(0.8, 0.9, 1.3), (2.0, 1.0, 0.0), (4.0, 1.0, -0.7)] {
        let s = SuperpositionState::cat(alpha, sigma, k)?.normalized()?;
        let x1 = oracle::numeric_moment(&s, Moment::X, spec)?.value.re;
        let x2 = oracle::numeric_moment(&s, Moment::X2, spec)?.value.re;
        let numeric = (x2 - x1 * x1).sqrt();
        let closed = cat_delta_x_closed(alpha, sigma);
        worst = worst.max((numeric - closed).abs() / closed);
    }
    Ok(Check {
        name: "delta_x_vs_quadrature",
        passed: worst <= 1e-9,
        worst,
        threshold: 1e-9,
        detail: "max relative error of the closed-form position width against \
                 quadrature moments"
            .into(),
    })
}

fn check_delta_k_adjudication(spec: &QuadratureSpec) -> Result<(Check, Vec<DeltaKRow>)> {
    let sigma = 1.0;
    let mut rows = Vec::new();
    // A form survives only when it matches quadrature on every row.
    let mut max_assembled = 0.0f64;
    let mut max_a = 0.0f64;
    let mut max_b = 0.0f64;
    for r in [0.0, 0.5, 1.0, 2.0, 4.0, 8.0] {
        let alpha = r * sigma;
        let s = SuperpositionState::cat(alpha, sigma, 0.0)?.normalized()?;
        let k1 = oracle::numeric_moment(&s, Moment::K, spec)?.value.re;
        let k2 = oracle::numeric_moment(&s, Moment::K2, spec)?.value.re;
        let numeric = k2 - k1 * k1;
        let dk = analysis::uncertainty_k(&s)?;
        let row = DeltaKRow {
            alpha_over_sigma: r,
            numeric,
            assembled: dk * dk,
            candidate_a: delta_k_sq_candidate_a(alpha, sigma),
            candidate_b: delta_k_sq_candidate_b(alpha, sigma),
        };
        max_assembled = max_assembled.max((row.assembled - numeric).abs() / numeric);
        max_a = max_a.max((row.candidate_a - numeric).abs() / numeric);
        max_b = max_b.max((row.candidate_b - numeric).abs() / numeric);
        rows.push(row);
    }
    let survivors = usize::from(max_assembled <= 1e-8)
        + usize::from(max_a <= 1e-8)
        + usize::from(max_b <= 1e-8);
    let check = Check {
        name: "delta_k_adjudication",
        passed: survivors == 1 && max_assembled <= 1e-8,
        worst: max_assembled,
        threshold: 1e-8,
        detail: format!(
            "assembled squared width within 1e-8 of quadrature on every row; \
             rival forms deviate by up to {max_a:.3e} and {max_b:.3e}"
        ),
    };
    Ok((check, rows))
}

fn check_product_candidate() -> Result<Check> {
    let mut min_dev = f64::INFINITY;
    for r in [0.5, 1.0, 2.0] {
        let (alpha, sigma) = (r, 1.0);
        let s = SuperpositionState::cat(alpha, sigma, 0.0)?.normalized()?;
        let rep = analysis::uncertainty_report(&s)?;
        let dev = (product_candidate(alpha, sigma) - rep.product).abs() / rep.product;
        min_dev = min_dev.min(dev);
    }
    Ok(Check {
        name: "product_candidate_rejected",
        passed: min_dev > 1e-3,
        worst: min_dev,
        threshold: 1e-3,
        detail: "min relative deviation of the rival uncertainty-product form; \
                 the check passes when the deviation stays ABOVE the threshold"
            .into(),
    })
}

fn check_overlap_response(rng: &mut ChaCha8Rng, spec: &QuadratureSpec) -> Result<Check> {
    let mut worst = 0.0f64;
    for i in 0..70 {
        let (alpha, sigma, k) = sample_cat(rng);
        let s = SuperpositionState::cat(alpha, sigma, k)?.normalized()?;
        let (dx, dk) = if i < 50 {
            (0.0, rng.gen_range(0.0..3.0 / sigma))
        } else {
            (rng.gen_range(-2.0..2.0), rng.gen_range(0.0..3.0 / sigma))
        };
        let closed = analysis::overlap_response_2d(&s, dx, dk)?;
        let q = oracle::numeric_overlap(&s.displaced(dx, dk), &s, spec)?.value;
        let err = (closed - q).norm();
        let bound = 1e-11f64.max(1e-9 * q.norm());
        worst = worst.max(err / bound);
    }
    Ok(Check {
        name: "overlap_response_vs_quadrature",
        passed: worst <= 1.0,
        worst,
        threshold: 1.0,
        detail: "max |closed - quadrature| / max(1e-11, 1e-9 |quadrature|) over 50 \
                 momentum and 20 joint displacements of random cats"
            .into(),
    })
}

fn check_ladder_residual() -> Result<Check> {
    let mut worst = 0.0f64;
    for alpha in [0.0, 0.7, 2.5, 5.0] {
        worst = worst.max(oracle::eigen_residual(alpha)?);
    }
    Ok(Check {
        name: "ladder_residual_packets",
        passed: worst <= 1e-12,
        worst,
        threshold: 1e-12,
        detail: "max sup-norm ladder residual of matched single packets".into(),
    })
}

fn check_ladder_flags_cat() -> Result<Check> {
    let s = SuperpositionState::cat(1.5, FRAC_1_SQRT_2, 0.0)?.normalized()?;
    let r = oracle::eigen_residual_for(&s, Complex64::new(1.5, 0.0));
    Ok(Check {
        name: "ladder_residual_flags_cat",
        passed: r > 0.1,
        worst: r,
        threshold: 0.1,
        detail: "cat-state ladder residual; the check passes when the residual \
                 stays ABOVE the threshold"
            .into(),
    })
}

fn check_fourier_widths() -> Result<Check> {
    let states = [
        SuperpositionState::coherent(0.8, 0.9, 1.3)?,
        SuperpositionState::cat(1.0, 1.0, 0.0)?,
        SuperpositionState::cat(2.0, 1.0, 0.0)?,
        SuperpositionState::cat(4.0, 1.0, 0.0)?,
        SuperpositionState::cat(1.5, 0.7, 0.8)?,
        SuperpositionState::compass(3.0, 1.0)?,
    ];
    let mut worst = 0.0f64;
    for state in states {
        let s = state.normalized()?;
        let rep = analysis::uncertainty_report(&s)?;
        let w = oracle::discrete_fourier_widths(&s, 16.0, 4096)?;
        worst = worst.max((w.delta_x - rep.delta_x).abs() / rep.delta_x);
        worst = worst.max((w.delta_k - rep.delta_k).abs() / rep.delta_k);
    }
    Ok(Check {
        name: "fourier_widths",
        passed: worst <= 1e-6,
        worst,
        threshold: 1e-6,
        detail: "max relative gap between discrete-Fourier and assembled widths \
                 over 6 states"
            .into(),
    })
}

fn check_heisenberg(rng: &mut ChaCha8Rng) -> Result<Check> {
    let mut worst_deficit = f64::NEG_INFINITY;
    for _ in 0..100 {
        let s = sample_state(rng);
        let rep = analysis::uncertainty_report(&s)?;
        worst_deficit = worst_deficit.max(0.5 * s.hbar() - rep.product);
    }
    Ok(Check {
        name: "heisenberg_floor",
        passed: worst_deficit <= 1e-12,
        worst: worst_deficit,
        threshold: 1e-12,
        detail: "max (hbar/2 - product) over 100 random superpositions; never \
                 meaningfully positive"
            .into(),
    })
}

fn check_heisenberg_equality() -> Result<Check> {
    let mut worst = 0.0f64;
    for state in [
        SuperpositionState::coherent(1.1, 0.8, 0.9)?,
        SuperpositionState::cat(0.0, 1.3, 0.2)?,
    ] {
        let rep = analysis::uncertainty_report(&state.normalized()?)?;
        worst = worst.max((rep.product - 0.5).abs());
    }
    Ok(Check {
        name: "heisenberg_equality",
        passed: worst <= 1e-12,
        worst,
        threshold: 1e-12,
        detail: "|product - 1/2| for minimum-uncertainty states (single packet, \
                 merged cat)"
            .into(),
    })
}

/// Runs the whole suite. Deterministic in `seed`; `perturb_kernel` biases the
/// closed-form kernel check only.
pub fn run(seed: u64, perturb_kernel: f64) -> Result<VerifyReport> {
    let spec = QuadratureSpec::default();
    let mut rng = seeded_rng(seed);
    let mut checks = Vec::new();
    checks.push(check_pair_kernels(&mut rng, perturb_kernel, &spec)?);
    checks.push(check_norm_constant()?);
    checks.push(check_norm_quadrature(&spec)?);
    checks.push(check_delta_x_closed()?);
    checks.push(check_delta_x_quadrature(&spec)?);
    let (adjudication, rows) = check_delta_k_adjudication(&spec)?;
    checks.push(adjudication);
    checks.push(check_product_candidate()?);
    checks.push(check_overlap_response(&mut rng, &spec)?);
    checks.push(check_ladder_residual()?);
    checks.push(check_ladder_flags_cat()?);
    checks.push(check_fourier_widths()?);
    checks.push(check_heisenberg(&mut rng)?);
    checks.push(check_heisenberg_equality()?);
    let passed = checks.iter().all(|c| c.passed);
    Ok(VerifyReport {
        seed,
        perturb_kernel,
        checks,
        delta_k_rows: rows,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes_clean() {
        let report = run(7, 0.0).unwrap();
        for c in &report.checks {
            assert!(c.passed, "{} failed: worst {} vs {}", c.name, c.worst, c.threshold);
        }
        assert!(report.passed);
        assert_eq!(report.delta_k_rows.len(), 6);
    }

    #[test]
    fn suite_is_deterministic() {
        let a = run(11, 0.0).unwrap();
        let b = run(11, 0.0).unwrap();
        for (ca, cb) in a.checks.iter().zip(&b.checks) {
            assert_eq!(ca.name, cb.name);
            assert_eq!(ca.worst.to_bits(), cb.worst.to_bits());
        }
    }

    #[test]
    fn perturbed_kernel_is_caught() {
        let report = run(7, 0.02).unwrap();
        let kernel_check = report
            .checks
            .iter()
            .find(|c| c.name == "pair_kernel_vs_quadrature")
            .unwrap();
        assert!(!kernel_check.passed);
        assert!(!report.passed);
        // nothing else is affected
        for c in report.checks.iter().filter(|c| c.name != "pair_kernel_vs_quadrature") {
            assert!(c.passed, "{} unexpectedly failed", c.name);
        }
    }

    #[test]
    fn closed_form_helpers_agree_with_assembly() {
        for (alpha, sigma) in [(0.5, 1.0), (2.0, 0.8), (3.0, 1.4)] {
            let s = SuperpositionState::cat(alpha, sigma, 0.0)
                .unwrap()
                .normalized()
                .unwrap();
            let dk = analysis::uncertainty_k(&s).unwrap();
            let closed = cat_delta_k_sq_closed(alpha, sigma);
            assert!((dk * dk - closed).abs() < 1e-13);
            let o = analysis::overlap_response(&s, 0.7).unwrap();
            assert!((o.re - cat_overlap_closed(alpha, sigma, 0.7)).abs() < 1e-13);
        }
    }
}
