//! Independent numerical checks: adaptive Gauss-Kronrod quadrature over
//! pointwise state evaluations, ladder-operator residuals on a dense grid,
//! and discrete-Fourier width estimates.
//!
//! Nothing here touches the closed-form kernels; every value is computed
//! from `evaluate`/`derivative` samples so the two paths can disagree.

use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::states::SuperpositionState;

/// 15-point Kronrod abscissae (positive half, descending).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_2,
    0.949_107_912_342_758_524_5,
    0.864_864_423_359_769_072_8,
    0.741_531_185_599_394_439_9,
    0.586_087_235_467_691_130_3,
    0.405_845_151_377_397_166_9,
    0.207_784_955_007_898_467_6,
    0.0,
];

/// Kronrod weights matching `XGK`.
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_96,
    0.063_092_092_629_978_553_29,
    0.104_790_010_322_250_183_8,
    0.140_653_259_715_525_918_7,
    0.169_004_726_639_267_902_8,
    0.190_350_578_064_785_409_9,
    0.204_432_940_075_298_892_4,
    0.209_482_141_084_727_828,
];

/// 7-point Gauss weights for the embedded rule (odd `XGK` indices + center).
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_3,
    0.279_705_391_489_276_667_9,
    0.381_830_050_505_118_944_9,
    0.417_959_183_673_469_387_8,
];

/// Tolerances and limits for the adaptive integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_depth: u32,
    /// Default integration half-width; state-aware wrappers widen it to
    /// cover the support.
    pub half_width: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_depth: 48,
            half_width: 10.0,
        }
    }
}

/// An integral estimate with a conservative error bound (sum of per-panel
/// Gauss/Kronrod differences).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: Complex64,
    pub error_bound: f64,
}

fn kronrod_panel(f: &dyn Fn(f64) -> Complex64, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for (j, &x) in XGK.iter().enumerate().take(7) {
        let f1 = f(c - h * x);
        let f2 = f(c + h * x);
        kron += WGK[j] * (f1 + f2);
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    (h * kron, (h * (kron - gauss)).norm())
}

struct AdaptState {
    error_bound: f64,
    saturated: bool,
}

fn adapt(
    f: &dyn Fn(f64) -> Complex64,
    a: f64,
    b: f64,
    tol: f64,
    depth: u32,
    max_depth: u32,
    st: &mut AdaptState,
) -> Complex64 {
    let (value, err) = kronrod_panel(f, a, b);
    if err <= tol || (b - a) <= 1e-15 * (a.abs() + b.abs() + 1.0) {
        st.error_bound += err;
        return value;
    }
    if depth >= max_depth {
        st.error_bound += err;
        st.saturated = true;
        return value;
    }
    let mid = 0.5 * (a + b);
    adapt(f, a, mid, 0.5 * tol, depth + 1, max_depth, st)
        + adapt(f, mid, b, 0.5 * tol, depth + 1, max_depth, st)
}

/// Integrates `f` over `[a, b]` adaptively. The working tolerance is
/// `max(abs_tol, rel_tol * |coarse|)` where `coarse` is a fixed 8-panel
/// estimate, so flat tails never force needless refinement.
pub fn integrate(
    f: impl Fn(f64) -> Complex64,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<Quadrature> {
    if !a.is_finite() || !b.is_finite() || b <= a {
        return Err(Error::InvalidRange(format!("interval [{a}, {b}]")));
    }
    let f = &f;
    let mut coarse = Complex64::new(0.0, 0.0);
    for i in 0..8 {
        let lo = a + (b - a) * i as f64 / 8.0;
        let hi = a + (b - a) * (i + 1) as f64 / 8.0;
        coarse += kronrod_panel(&f, lo, hi).0;
    }
    let tol = spec.abs_tol.max(spec.rel_tol * coarse.norm());
    let mut st = AdaptState {
        error_bound: 0.0,
        saturated: false,
    };
    let value = adapt(&f, a, b, tol, 0, spec.max_depth, &mut st);
    if st.saturated {
        return Err(Error::MaxDepthExceeded {
            estimate: value,
            error_bound: st.error_bound,
        });
    }
    Ok(Quadrature {
        value,
        error_bound: st.error_bound,
    })
}

fn support_half_width(states: &[&SuperpositionState], spec: &QuadratureSpec) -> f64 {
    let mut hw = spec.half_width;
    for s in states {
        hw = hw.max(s.extreme_center() + 10.0 * s.sigma());
    }
    hw
}

/// `<bra|ket>` by quadrature over pointwise evaluations (norm constants
/// included when set).
pub fn numeric_overlap(
    bra: &SuperpositionState,
    ket: &SuperpositionState,
    spec: &QuadratureSpec,
) -> Result<Quadrature> {
    let hw = support_half_width(&[bra, ket], spec);
    integrate(
        |x| bra.evaluate(x).conj() * ket.evaluate(x),
        -hw,
        hw,
        spec,
    )
}

/// Observable selector for [`numeric_moment`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Moment {
    X,
    X2,
    K,
    K2,
}

/// Expectation values by quadrature: position moments through the density,
/// wavenumber moments through the analytic derivative
/// (`<k> = Im ∫ conj(psi) psi' dx`, `<k^2> = ∫ |psi'|^2 dx`).
pub fn numeric_moment(
    state: &SuperpositionState,
    moment: Moment,
    spec: &QuadratureSpec,
) -> Result<Quadrature> {
    let hw = support_half_width(&[state], spec);
    let minus_i = Complex64::new(0.0, -1.0);
    match moment {
        Moment::X => integrate(
            |x| Complex64::new(x * state.evaluate(x).norm_sqr(), 0.0),
            -hw,
            hw,
            spec,
        ),
        Moment::X2 => integrate(
            |x| Complex64::new(x * x * state.evaluate(x).norm_sqr(), 0.0),
            -hw,
            hw,
            spec,
        ),
        Moment::K => integrate(
            |x| state.evaluate(x).conj() * minus_i * state.derivative(x),
            -hw,
            hw,
            spec,
        ),
        Moment::K2 => integrate(
            |x| Complex64::new(state.derivative(x).norm_sqr(), 0.0),
            -hw,
            hw,
            spec,
        ),
    }
}

/// Sup-norm residual of the ladder relation `(x + d/dx) psi = lambda psi`
/// over a dense grid covering the support, normalized by the peak of `psi`.
/// Zero (to rounding) exactly when the state is a single packet with
/// `sigma = 1/sqrt(2)` and `lambda = center + i * carrier`.
pub fn eigen_residual_for(state: &SuperpositionState, lambda: Complex64) -> f64 {
    let hw = state.extreme_center() + 10.0 * state.sigma();
    let n = 4001;
    let mut worst = 0.0f64;
    let mut peak = 0.0f64;
    for i in 0..n {
        let x = -hw + 2.0 * hw * i as f64 / (n - 1) as f64;
        let psi = state.evaluate(x);
        let r = x * psi + state.derivative(x) - lambda * psi;
        worst = worst.max(r.norm());
        peak = peak.max(psi.norm());
    }
    worst / peak
}

/// Ladder residual of the packet `coherent(alpha, 1/sqrt(2), 0)` against its
/// own eigenvalue; vanishes to rounding for every `alpha`.
pub fn eigen_residual(alpha: f64) -> Result<f64> {
    let s = SuperpositionState::coherent(alpha, std::f64::consts::FRAC_1_SQRT_2, 0.0)?
        .normalized()?;
    Ok(eigen_residual_for(&s, Complex64::new(alpha, 0.0)))
}

/// Position and wavenumber widths from a sampled state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DftWidths {
    pub delta_x: f64,
    pub delta_k: f64,
}

/// Widths via grid sums and a discrete Fourier transform: `delta_x` from the
/// sampled density, `delta_k` from `|dx * FFT|^2 / (2 pi)` on the signed
/// frequency grid `k_m = 2 pi m / (n dx)`.
///
/// Rejects grids whose extreme frequency bins still carry weight (spectrum
/// wider than the grid resolves), since moments would silently alias.
pub fn discrete_fourier_widths(
    state: &SuperpositionState,
    half_width: f64,
    n: usize,
) -> Result<DftWidths> {
    let grid = state.to_grid(half_width, n)?;
    let dx = grid.dx();
    let n = grid.len();

    let mut norm_x = 0.0;
    let mut mean_x = 0.0;
    let mut mean_x2 = 0.0;
    for (i, v) in grid.values().iter().enumerate() {
        let w = v.norm_sqr() * dx;
        let x = grid.x_at(i);
        norm_x += w;
        mean_x += x * w;
        mean_x2 += x * x * w;
    }
    mean_x /= norm_x;
    mean_x2 /= norm_x;

    let mut buf: Vec<Complex64> = grid.values().to_vec();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);

    let peak = buf.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let half = n / 2;
    // Bins at the largest |k| sampled, on both sides of the Nyquist fold.
    let edge = buf[half]
        .norm()
        .max(buf[half - 1].norm())
        .max(buf[(half + 1) % n].norm());
    if edge > 1e-8 * peak {
        return Err(Error::GridTooCoarse(format!(
            "spectral weight {edge:.3e} at the Nyquist bin (peak {peak:.3e}); \
             widen the grid or raise n"
        )));
    }

    let dk = TAU / (n as f64 * dx);
    let mut norm_k = 0.0;
    let mut mean_k = 0.0;
    let mut mean_k2 = 0.0;
    for (m, v) in buf.iter().enumerate() {
        let m_signed = if m <= (n - 1) / 2 {
            m as f64
        } else {
            m as f64 - n as f64
        };
        let k = dk * m_signed;
        let w = (dx * v.norm()).powi(2) / TAU * dk;
        norm_k += w;
        mean_k += k * w;
        mean_k2 += k * k * w;
    }
    mean_k /= norm_k;
    mean_k2 /= norm_k;

    Ok(DftWidths {
        delta_x: (mean_x2 - mean_x * mean_x).max(0.0).sqrt(),
        delta_k: (mean_k2 - mean_k * mean_k).max(0.0).sqrt(),
    })
}
