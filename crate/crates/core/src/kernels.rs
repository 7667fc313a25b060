//! Closed-form integrals over pairs of Gaussian components.
//!
//! Everything the analysis layer reports is assembled from three pair
//! kernels. With `da = a - b`, `dk = k_b - k_a`, and `m = (a + b)/2`:
//!
//! ```text
//! overlap   K  = ∫ g_a* g_b dx
//!              = sqrt(2 pi) sigma · exp(-da^2/(8 s^2) - s^2 dk^2 / 2) · e^{i dk m}
//! x-moment  ∫ g_a* g_b x^n dx   = K · mu^n-ish   with mu = m + i s^2 dk
//!            (n = 1: mu K;  n = 2: (mu^2 + s^2) K)
//! p-moment  ∫ g_a* (-i d/dx)^n g_b dx = K · w^n-ish  with
//!            w = (k_a + k_b)/2 + i (a - b)/(4 s^2)
//!            (n = 1: w K;  n = 2: (w^2 + 1/(4 s^2)) K)
//! ```
//!
//! where `g_a(x) = exp(-(x-a)^2/(4 s^2)) e^{i k_a x}` is a *bare* component:
//! the kernels return unnormalized integrals, and amplitude factors are the
//! caller's job. The shifted complex mean `mu` and the momentum weight `w`
//! absorb mismatched carriers, so the second-moment assembly never needs a
//! special case.

use ndarray::Array2;
use num_complex::Complex64;
use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::states::{GaussianComponent, SuperpositionState};

/// Parameters of one bra/ket component pair at a shared width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairKey {
    pub center_a: f64,
    pub center_b: f64,
    pub carrier_a: f64,
    pub carrier_b: f64,
    pub sigma: f64,
}

impl PairKey {
    pub fn new(center_a: f64, center_b: f64, carrier_a: f64, carrier_b: f64, sigma: f64) -> Self {
        Self {
            center_a,
            center_b,
            carrier_a,
            carrier_b,
            sigma,
        }
    }

    /// Key for `∫ bra* ket` between two components of one state.
    pub fn between(bra: &GaussianComponent, ket: &GaussianComponent, sigma: f64) -> Self {
        Self::new(bra.center, ket.center, bra.carrier, ket.carrier, sigma)
    }
}

/// Phase factor `e^{i theta}` with the argument reduced mod 2 pi first.
fn phase(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta.rem_euclid(TAU))
}

/// `∫ g_a*(x) g_b(x) dx` in closed form. Always converges; the magnitude is
/// bounded by `sqrt(2 pi) sigma` with equality only for identical packets.
pub fn pair_overlap(key: &PairKey) -> Complex64 {
    let s2 = key.sigma * key.sigma;
    let da = key.center_a - key.center_b;
    let dk = key.carrier_b - key.carrier_a;
    let mag = TAU.sqrt() * key.sigma * (-da * da / (8.0 * s2) - s2 * dk * dk / 2.0).exp();
    mag * phase(dk * (key.center_a + key.center_b) / 2.0)
}

/// Shifted complex mean `mu = (a + b)/2 + i sigma^2 (k_b - k_a)`; the
/// first and second x-moments of the pair are `mu K` and `(mu^2 + s^2) K`.
pub(crate) fn shifted_mean(key: &PairKey) -> Complex64 {
    Complex64::new(
        (key.center_a + key.center_b) / 2.0,
        key.sigma * key.sigma * (key.carrier_b - key.carrier_a),
    )
}

/// Momentum weight `w = (k_a + k_b)/2 + i (a - b)/(4 sigma^2)`; the first and
/// second derivative moments of the pair are `w K` and `(w^2 + 1/(4 s^2)) K`.
pub(crate) fn momentum_weight(key: &PairKey) -> Complex64 {
    Complex64::new(
        (key.carrier_a + key.carrier_b) / 2.0,
        (key.center_a - key.center_b) / (4.0 * key.sigma * key.sigma),
    )
}

/// `∫ g_a* g_b x^order dx` for any carriers; used by the analysis assembly.
pub(crate) fn phased_x_moment(key: &PairKey, order: u8) -> Complex64 {
    let k0 = pair_overlap(key);
    match order {
        0 => k0,
        1 => shifted_mean(key) * k0,
        2 => {
            let mu = shifted_mean(key);
            (mu * mu + key.sigma * key.sigma) * k0
        }
        _ => panic!("x-moment order must be 0, 1, or 2"),
    }
}

/// `∫ g_a g_b x^order dx` at matched carriers (the plane waves cancel).
///
/// Mismatched carriers are rejected: that case is the phase-shifted overlap
/// problem and is handled internally through [`pair_overlap`] and the shifted
/// complex mean, not through this kernel.
pub fn pair_x_moment(key: &PairKey, order: u8) -> Result<Complex64> {
    if key.carrier_a != key.carrier_b {
        return Err(Error::CarrierMismatch {
            carrier_a: key.carrier_a,
            carrier_b: key.carrier_b,
        });
    }
    assert!(order <= 2, "x-moment order must be 0, 1, or 2");
    Ok(phased_x_moment(key, order))
}

/// `∫ g_a* (-i d/dx)^order g_b dx` for order 1 or 2, any carriers.
///
/// Assembled from the overlap kernel via the product rule: the derivative of
/// a component is `(i k - (x - b)/(2 s^2))` times itself, and collecting the
/// resulting x-moments gives the `w`-weighted forms above.
pub fn pair_p_moment(key: &PairKey, order: u8) -> Complex64 {
    let k0 = pair_overlap(key);
    let w = momentum_weight(key);
    match order {
        1 => w * k0,
        2 => (w * w + 1.0 / (4.0 * key.sigma * key.sigma)) * k0,
        _ => panic!("p-moment order must be 1 or 2"),
    }
}

/// Hermitian matrix `G_ij = ∫ g_i* g_j dx` of bare pair overlaps.
pub fn gram_matrix(state: &SuperpositionState) -> Array2<Complex64> {
    let comps = state.components();
    let n = comps.len();
    Array2::from_shape_fn((n, n), |(i, j)| {
        pair_overlap(&PairKey::between(&comps[i], &comps[j], state.sigma()))
    })
}

/// Real quadratic form `sum_ij conj(c_i) c_j G_ij`; the squared norm of the
/// unnormalized state. The imaginary part cancels by Hermitian symmetry.
pub(crate) fn gram_quadratic_form(state: &SuperpositionState) -> f64 {
    let comps = state.components();
    let mut q = Complex64::new(0.0, 0.0);
    for bra in comps {
        for ket in comps {
            q += bra.amplitude.conj()
                * ket.amplitude
                * pair_overlap(&PairKey::between(bra, ket, state.sigma()));
        }
    }
    q.re
}
