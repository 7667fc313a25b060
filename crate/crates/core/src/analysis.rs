//! Physics derived from the pair kernels: uncertainty reports, displacement
//! responses, orthogonality shifts below the spectral width, regime scans,
//! and Wigner phase-space maps.
//!
//! Every quantity here is assembled from closed-form kernels; the `oracle`
//! module provides the independent quadrature path that the verify suite
//! compares against.

use ndarray::Array2;
use num_complex::Complex64;
use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::kernels::{self, PairKey};
use crate::states::SuperpositionState;

/// Position and momentum widths of a normalized state.
///
/// `delta_k` is the wavenumber width; `delta_p = hbar * delta_k` and
/// `product = delta_x * delta_p`, which never drops below `hbar/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UncertaintyReport {
    pub delta_x: f64,
    pub delta_k: f64,
    pub delta_p: f64,
    pub product: f64,
    pub mean_x: f64,
    pub mean_p: f64,
}

/// First momentum shift that makes the displaced state orthogonal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrthogonalityResult {
    pub delta_star: f64,
    /// |overlap| at the returned shift; below 1e-10 by construction.
    pub residual: f64,
    /// Final search interval; contains `delta_star`.
    pub bracket: (f64, f64),
    /// `delta_star / delta_k`; below 1 means orthogonality arrives inside
    /// the spectral width.
    pub ratio: f64,
    pub subfourier: bool,
}

/// One row of a cat-state regime scan. `None` marks a root search that found
/// no zero below its cutoff; serializers print it as `NA`, never as NaN.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRow {
    pub alpha_over_sigma: f64,
    pub delta_x: f64,
    pub delta_k: f64,
    pub delta_star: Option<f64>,
    pub ratio: Option<f64>,
    pub product: f64,
    pub subfourier: bool,
}

fn require_normalized(state: &SuperpositionState) -> Result<f64> {
    state.norm_constant().ok_or(Error::NotNormalized)
}

/// `N^2 sum_ij conj(c_i) c_j f(key_ij)` over all component pairs.
fn assemble(
    state: &SuperpositionState,
    f: impl Fn(&PairKey) -> Complex64,
) -> Result<Complex64> {
    let n = require_normalized(state)?;
    let comps = state.components();
    let mut acc = Complex64::new(0.0, 0.0);
    for bra in comps {
        for ket in comps {
            acc += bra.amplitude.conj()
                * ket.amplitude
                * f(&PairKey::between(bra, ket, state.sigma()));
        }
    }
    Ok(n * n * acc)
}

/// Closed-form inner product of two states (norm constants applied when set).
pub fn state_overlap(bra: &SuperpositionState, ket: &SuperpositionState) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for b in bra.components() {
        for k in ket.components() {
            acc += b.amplitude.conj()
                * k.amplitude
                * kernels::pair_overlap(&PairKey::between(b, k, bra.sigma()));
        }
    }
    bra.effective_norm() * ket.effective_norm() * acc
}

fn variance(mean: f64, second: f64) -> Result<f64> {
    let var = second - mean * mean;
    if var < -1e-12 {
        return Err(Error::NegativeVariance(var));
    }
    Ok(var.max(0.0))
}

fn x_moments(state: &SuperpositionState) -> Result<(f64, f64)> {
    let m1 = assemble(state, |k| kernels::phased_x_moment(k, 1))?.re;
    let m2 = assemble(state, |k| kernels::phased_x_moment(k, 2))?.re;
    Ok((m1, m2))
}

fn k_moments(state: &SuperpositionState) -> Result<(f64, f64)> {
    let m1 = assemble(state, |k| kernels::pair_p_moment(k, 1))?.re;
    let m2 = assemble(state, |k| kernels::pair_p_moment(k, 2))?.re;
    Ok((m1, m2))
}

/// Position width of a normalized state.
pub fn uncertainty_x(state: &SuperpositionState) -> Result<f64> {
    let (m1, m2) = x_moments(state)?;
    Ok(variance(m1, m2)?.sqrt())
}

/// Wavenumber width of a normalized state.
pub fn uncertainty_k(state: &SuperpositionState) -> Result<f64> {
    let (m1, m2) = k_moments(state)?;
    Ok(variance(m1, m2)?.sqrt())
}

/// Full width report; `hbar` enters only here, converting `delta_k` into a
/// momentum width.
pub fn uncertainty_report(state: &SuperpositionState) -> Result<UncertaintyReport> {
    let (x1, x2) = x_moments(state)?;
    let (k1, k2) = k_moments(state)?;
    let delta_x = variance(x1, x2)?.sqrt();
    let delta_k = variance(k1, k2)?.sqrt();
    let hbar = state.hbar();
    Ok(UncertaintyReport {
        delta_x,
        delta_k,
        delta_p: hbar * delta_k,
        product: delta_x * hbar * delta_k,
        mean_x: x1,
        mean_p: hbar * k1,
    })
}

/// Overlap between the momentum-displaced state and itself:
/// `O(delta) = <D(0, delta) psi | psi>`. For a cat this reduces to
/// `e^{-sigma^2 delta^2 / 2} (cos(alpha delta) + eps) / (1 + eps)` with
/// `eps = e^{-alpha^2 / (2 sigma^2)}`.
pub fn overlap_response(state: &SuperpositionState, delta: f64) -> Result<Complex64> {
    require_normalized(state)?;
    Ok(state_overlap(&state.displaced(0.0, delta), state))
}

/// Overlap against a state displaced in both position and momentum.
pub fn overlap_response_2d(
    state: &SuperpositionState,
    delta_x: f64,
    delta_k: f64,
) -> Result<Complex64> {
    require_normalized(state)?;
    Ok(state_overlap(&state.displaced(delta_x, delta_k), state))
}

/// Default root-search cutoff: the first cat zero sits at or below
/// `pi / max|center|`, with a margin; center-free states fall back to a few
/// spectral widths (they have no zeros, and the search exits quickly).
pub fn auto_k_max(state: &SuperpositionState) -> f64 {
    let a = state.extreme_center();
    if a > 1e-9 {
        (PI + 0.5) / a
    } else {
        8.0 / state.sigma()
    }
}

fn bisect(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64, f64) {
    let mut flo = f(lo);
    for _ in 0..200 {
        if hi - lo <= 1e-14 * hi.max(1.0) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return (mid, mid, mid);
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    (0.5 * (lo + hi), lo, hi)
}

fn minimize(g: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..300 {
        if hi - lo <= 1e-14 * hi.max(1.0) {
            break;
        }
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if g(m1) <= g(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    0.5 * (lo + hi)
}

/// Locates the smallest `delta` in `(0, k_max]` where the momentum-displaced
/// state becomes orthogonal to the original.
///
/// The response is scanned at spacing `min(pi/(8 max|center|), 1/(8 sigma))`,
/// which divides pi exactly in carrier-free units, so the narrow dips of
/// near-degenerate cats are always sampled. Real responses (every state whose
/// density is even) are refined by sign-change bisection; complex responses
/// are refined by minimizing `|O|^2` at strict interior minima, accepting a
/// root only when the refined overlap drops below 1e-10 and sits well below
/// both scan neighbours, so monotone tail decay is never mistaken for a zero.
pub fn find_delta_star(state: &SuperpositionState, k_max: f64) -> Result<OrthogonalityResult> {
    require_normalized(state)?;
    if !(k_max > 0.0) || !k_max.is_finite() {
        return Err(Error::InvalidRange(format!("k_max {k_max}")));
    }
    let a_max = state.extreme_center();
    let mut h = 1.0 / (8.0 * state.sigma());
    if a_max > 0.0 {
        h = h.min(PI / (8.0 * a_max));
    }
    h = h.min(k_max / 16.0);

    let n = (k_max / h).ceil() as usize;
    let mut deltas = Vec::with_capacity(n + 1);
    let mut resp = Vec::with_capacity(n + 1);
    deltas.push(0.0);
    resp.push(Complex64::new(1.0, 0.0));
    for i in 1..=n {
        let d = (i as f64 * h).min(k_max);
        deltas.push(d);
        resp.push(overlap_response(state, d)?);
        if d >= k_max {
            break;
        }
    }

    let max_imag = resp.iter().map(|v| v.im.abs()).fold(0.0, f64::max);
    let found = if max_imag <= 1e-12 {
        find_real_root(state, &deltas, &resp)?
    } else {
        find_complex_root(state, &deltas, &resp)?
    };

    let (delta_star, residual, bracket) = match found {
        Some(hit) => hit,
        None => return Err(Error::NoRoot { k_max }),
    };
    let ratio = delta_star / uncertainty_k(state)?;
    Ok(OrthogonalityResult {
        delta_star,
        residual,
        bracket,
        ratio,
        subfourier: ratio < 1.0,
    })
}

type RootHit = Option<(f64, f64, (f64, f64))>;

fn find_real_root(
    state: &SuperpositionState,
    deltas: &[f64],
    resp: &[Complex64],
) -> Result<RootHit> {
    let f = |d: f64| overlap_response(state, d).map(|v| v.re).unwrap_or(f64::NAN);
    for i in 1..deltas.len() {
        let (fa, fb) = (resp[i - 1].re, resp[i].re);
        if fb == 0.0 || (fa > 0.0) != (fb > 0.0) {
            let (root, lo, hi) = if fb == 0.0 {
                (deltas[i], deltas[i], deltas[i])
            } else {
                bisect(&f, deltas[i - 1], deltas[i])
            };
            let residual = overlap_response(state, root)?.norm();
            return Ok(Some((root, residual, (lo, hi))));
        }
    }
    Ok(None)
}

fn find_complex_root(
    state: &SuperpositionState,
    deltas: &[f64],
    resp: &[Complex64],
) -> Result<RootHit> {
    let g = |d: f64| {
        overlap_response(state, d)
            .map(|v| v.norm_sqr())
            .unwrap_or(f64::INFINITY)
    };
    for i in 1..deltas.len().saturating_sub(1) {
        let m = resp[i].norm_sqr();
        if m < resp[i - 1].norm_sqr() && m < resp[i + 1].norm_sqr() {
            let root = minimize(&g, deltas[i - 1], deltas[i + 1]);
            let residual = overlap_response(state, root)?.norm();
            let neighbour = resp[i - 1].norm().min(resp[i + 1].norm());
            if residual < 1e-10 && neighbour > 1e3 * residual {
                return Ok(Some((root, residual, (deltas[i - 1], deltas[i + 1]))));
            }
        }
    }
    Ok(None)
}

/// `find_delta_star` with the ratio and flag attached; kept as the named
/// entry point for callers that only care about the sub-Fourier question.
pub fn subfourier_ratio(state: &SuperpositionState, k_max: f64) -> Result<OrthogonalityResult> {
    find_delta_star(state, k_max)
}

/// Sweeps cat states over `alpha/sigma` in `range` (inclusive, `steps` points)
/// at fixed `sigma`, reporting widths and the orthogonality shift per row.
/// Rows where the root search finds nothing carry `None`, not an error.
pub fn regime_scan(range: (f64, f64), sigma: f64, steps: usize) -> Result<Vec<ScanRow>> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::NonPositiveSigma(sigma));
    }
    let (lo, hi) = range;
    if !lo.is_finite() || !hi.is_finite() || !(lo > 0.0) || hi < lo {
        return Err(Error::InvalidRange(format!(
            "alpha/sigma range [{lo}, {hi}] must be positive and ordered"
        )));
    }
    if steps < 2 {
        return Err(Error::InvalidRange(format!(
            "steps = {steps}, need at least 2"
        )));
    }
    let mut rows = Vec::with_capacity(steps);
    for i in 0..steps {
        let r = lo + (hi - lo) * i as f64 / (steps - 1) as f64;
        let state = SuperpositionState::cat(r * sigma, sigma, 0.0)?.normalized()?;
        let rep = uncertainty_report(&state)?;
        let row = match find_delta_star(&state, auto_k_max(&state)) {
            Ok(hit) => ScanRow {
                alpha_over_sigma: r,
                delta_x: rep.delta_x,
                delta_k: rep.delta_k,
                delta_star: Some(hit.delta_star),
                ratio: Some(hit.ratio),
                product: rep.product,
                subfourier: hit.subfourier,
            },
            Err(Error::NoRoot { .. }) => ScanRow {
                alpha_over_sigma: r,
                delta_x: rep.delta_x,
                delta_k: rep.delta_k,
                delta_star: None,
                ratio: None,
                product: rep.product,
                subfourier: false,
            },
            Err(e) => return Err(e),
        };
        rows.push(row);
    }
    Ok(rows)
}

/// Wigner map samples on a rectangular phase-space grid.
#[derive(Debug, Clone)]
pub struct WignerGrid {
    xs: Vec<f64>,
    ks: Vec<f64>,
    values: Array2<f64>,
    max_imag_residue: f64,
}

impl WignerGrid {
    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ks(&self) -> &[f64] {
        &self.ks
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    pub fn dx(&self) -> f64 {
        self.xs[1] - self.xs[0]
    }

    pub fn dk(&self) -> f64 {
        self.ks[1] - self.ks[0]
    }

    /// Largest |imaginary part| discarded when realizing the map; stays below
    /// 1e-10 of the peak because the pair sum is Hermitian.
    pub fn max_imag_residue(&self) -> f64 {
        self.max_imag_residue
    }

    /// Riemann integral over the grid; 1 for a normalized state on a grid
    /// covering its support.
    pub fn integral(&self) -> f64 {
        self.values.sum() * self.dx() * self.dk()
    }

    /// Integrates out k; matches the position density |psi(x)|^2.
    pub fn marginal_x(&self) -> Vec<f64> {
        let dk = self.dk();
        self.values
            .rows()
            .into_iter()
            .map(|row| row.sum() * dk)
            .collect()
    }

    /// Integrates out x; matches the momentum density.
    pub fn marginal_k(&self) -> Vec<f64> {
        let dx = self.dx();
        self.values
            .columns()
            .into_iter()
            .map(|col| col.sum() * dx)
            .collect()
    }
}

struct WignerPair {
    coeff: Complex64,
    abar: f64,
    kbar: f64,
    osc_x: f64,
    osc_k: f64,
}

struct WignerAssembly {
    pairs: Vec<WignerPair>,
    inv_two_s2: f64,
    two_s2: f64,
}

impl WignerAssembly {
    fn build(state: &SuperpositionState) -> Result<Self> {
        let n = require_normalized(state)?;
        let s = state.sigma();
        let pref = n * n / PI * TAU.sqrt() * s;
        let comps = state.components();
        let mut pairs = Vec::with_capacity(comps.len() * comps.len());
        for bra in comps {
            for ket in comps {
                pairs.push(WignerPair {
                    coeff: bra.amplitude.conj() * ket.amplitude * pref,
                    abar: 0.5 * (bra.center + ket.center),
                    kbar: 0.5 * (bra.carrier + ket.carrier),
                    osc_x: ket.carrier - bra.carrier,
                    osc_k: ket.center - bra.center,
                });
            }
        }
        Ok(Self {
            pairs,
            inv_two_s2: 1.0 / (2.0 * s * s),
            two_s2: 2.0 * s * s,
        })
    }

    fn eval(&self, x: f64, k: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for p in &self.pairs {
            let dx = x - p.abar;
            let dk = k - p.kbar;
            let mag = (-dx * dx * self.inv_two_s2 - self.two_s2 * dk * dk).exp();
            let theta = (p.osc_x * x - dk * p.osc_k).rem_euclid(TAU);
            acc += p.coeff * mag * Complex64::from_polar(1.0, theta);
        }
        acc
    }
}

/// Single Wigner sample `W(x, k)` as a complex number, before the imaginary
/// residue (Hermitian cancellation noise) is dropped.
pub fn wigner_point(state: &SuperpositionState, x: f64, k: f64) -> Result<Complex64> {
    Ok(WignerAssembly::build(state)?.eval(x, k))
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

/// Evaluates the Wigner map `W(x, k) = (1/pi) ∫ psi*(x+y) psi(x-y) e^{2iky} dy`
/// on the given grid through the closed-form pair decomposition: each bra/ket
/// pair contributes one Gaussian in phase space centered at the pair midpoint.
///
/// The grid must cover the state's support (8 sigma beyond the extreme
/// centers, four spectral widths beyond the extreme carriers) and resolve
/// both the packet widths and the interference oscillations.
pub fn wigner_grid(
    state: &SuperpositionState,
    x_range: (f64, f64),
    k_range: (f64, f64),
    nx: usize,
    nk: usize,
) -> Result<WignerGrid> {
    require_normalized(state)?;
    for (lo, hi, label) in [(x_range.0, x_range.1, "x"), (k_range.0, k_range.1, "k")] {
        if !lo.is_finite() || !hi.is_finite() || hi <= lo {
            return Err(Error::InvalidRange(format!("{label} range [{lo}, {hi}]")));
        }
    }
    if nx < 16 || nk < 16 {
        return Err(Error::GridTooCoarse(format!(
            "nx = {nx}, nk = {nk}; need at least 16 points per axis"
        )));
    }
    let s = state.sigma();
    let comps = state.components();
    let (mut a_lo, mut a_hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut k_lo, mut k_hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for c in comps {
        a_lo = a_lo.min(c.center);
        a_hi = a_hi.max(c.center);
        k_lo = k_lo.min(c.carrier);
        k_hi = k_hi.max(c.carrier);
    }
    let slack = 1e-9;
    let (need_xlo, need_xhi) = (a_lo - 8.0 * s, a_hi + 8.0 * s);
    let (need_klo, need_khi) = (k_lo - 4.0 / s, k_hi + 4.0 / s);
    if x_range.0 > need_xlo + slack || x_range.1 < need_xhi - slack {
        return Err(Error::GridTooCoarse(format!(
            "x range [{}, {}] does not cover the support; need [{need_xlo:.3}, {need_xhi:.3}]",
            x_range.0, x_range.1
        )));
    }
    if k_range.0 > need_klo + slack || k_range.1 < need_khi - slack {
        return Err(Error::GridTooCoarse(format!(
            "k range [{}, {}] does not cover the support; need [{need_klo:.3}, {need_khi:.3}]",
            k_range.0, k_range.1
        )));
    }
    let dx = (x_range.1 - x_range.0) / (nx - 1) as f64;
    let dk = (k_range.1 - k_range.0) / (nk - 1) as f64;
    let span_k = k_hi - k_lo;
    let span_a = a_hi - a_lo;
    let mut dx_max = s / 4.0;
    if span_k > 0.0 {
        dx_max = dx_max.min(PI / (4.0 * span_k));
    }
    let mut dk_max = 1.0 / (8.0 * s);
    if span_a > 0.0 {
        dk_max = dk_max.min(PI / (4.0 * span_a));
    }
    if dx > dx_max {
        let needed = ((x_range.1 - x_range.0) / dx_max).ceil() as usize + 1;
        return Err(Error::GridTooCoarse(format!(
            "dx = {dx:.5} exceeds {dx_max:.5}; need nx >= {needed}"
        )));
    }
    if dk > dk_max {
        let needed = ((k_range.1 - k_range.0) / dk_max).ceil() as usize + 1;
        return Err(Error::GridTooCoarse(format!(
            "dk = {dk:.5} exceeds {dk_max:.5}; need nk >= {needed}"
        )));
    }

    let assembly = WignerAssembly::build(state)?;
    let xs = linspace(x_range.0, x_range.1, nx);
    let ks = linspace(k_range.0, k_range.1, nk);
    let mut values = Array2::zeros((nx, nk));
    let mut max_imag = 0.0f64;
    for (i, &x) in xs.iter().enumerate() {
        for (j, &k) in ks.iter().enumerate() {
            let w = assembly.eval(x, k);
            values[(i, j)] = w.re;
            max_imag = max_imag.max(w.im.abs());
        }
    }
    Ok(WignerGrid {
        xs,
        ks,
        values,
        max_imag_residue: max_imag,
    })
}
