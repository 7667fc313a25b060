//! Superpositions of equal-width Gaussian wavepackets.
//!
//! A component is `exp(-(x-a)^2 / (4 sigma^2)) * exp(i k x)` with a complex
//! amplitude; a state is a finite sum of components sharing one `sigma`,
//! scaled by an overall normalization constant once `normalized` has run.
//! States are immutable: every operation returns a new value.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernels;

/// One Gaussian envelope with a plane-wave carrier.
///
/// The stored `carrier` is the literal frequency of `exp(i k x)`. The
/// convenience constructors on [`SuperpositionState`] store `-k` for a
/// requested carrier `k`, so a positive momentum displacement maps onto a
/// positive shift of the stored carrier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianComponent {
    pub center: f64,
    pub carrier: f64,
    pub amplitude: Complex64,
}

impl GaussianComponent {
    pub fn new(center: f64, carrier: f64, amplitude: Complex64) -> Self {
        Self {
            center,
            carrier,
            amplitude,
        }
    }
}

/// A normalizable superposition of Gaussian components with a shared width.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperpositionState {
    components: Vec<GaussianComponent>,
    sigma: f64,
    norm_constant: Option<f64>,
    hbar: f64,
}

fn check_sigma(sigma: f64) -> Result<()> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::NonPositiveSigma(sigma));
    }
    Ok(())
}

impl SuperpositionState {
    /// Builds a state from explicit components. Zero-amplitude components are
    /// dropped; an empty result is rejected.
    pub fn new(components: Vec<GaussianComponent>, sigma: f64) -> Result<Self> {
        check_sigma(sigma)?;
        for c in &components {
            if !c.center.is_finite() || !c.carrier.is_finite() || !c.amplitude.is_finite() {
                return Err(Error::InvalidRange(format!(
                    "non-finite component: center {}, carrier {}, amplitude {}",
                    c.center, c.carrier, c.amplitude
                )));
            }
        }
        let components: Vec<_> = components
            .into_iter()
            .filter(|c| c.amplitude.norm_sqr() > 0.0)
            .collect();
        if components.is_empty() {
            return Err(Error::EmptyState);
        }
        Ok(Self {
            components,
            sigma,
            norm_constant: None,
            hbar: 1.0,
        })
    }

    /// Single wavepacket at `alpha` with carrier phase `exp(-i k x)`.
    pub fn coherent(alpha: f64, sigma: f64, k: f64) -> Result<Self> {
        Self::new(
            vec![GaussianComponent::new(alpha, -k, Complex64::new(1.0, 0.0))],
            sigma,
        )
    }

    /// Two equal-amplitude packets at `±alpha`, both carrying `exp(-i k x)`.
    /// `alpha = 0` is allowed: the state degenerates to twice a coherent packet
    /// and normalization absorbs the factor.
    pub fn cat(alpha: f64, sigma: f64, k: f64) -> Result<Self> {
        let one = Complex64::new(1.0, 0.0);
        Self::new(
            vec![
                GaussianComponent::new(alpha, -k, one),
                GaussianComponent::new(-alpha, -k, one),
            ],
            sigma,
        )
    }

    /// Four equal-amplitude packets at the phase-space points `(±alpha, 0)`
    /// and `(0, ±alpha / (2 sigma^2))`: position displacements and momentum
    /// displacements of matched dimensionless magnitude.
    pub fn compass(alpha: f64, sigma: f64) -> Result<Self> {
        check_sigma(sigma)?;
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::NonPositiveAlpha(alpha));
        }
        let kappa = alpha / (2.0 * sigma * sigma);
        let one = Complex64::new(1.0, 0.0);
        Self::new(
            vec![
                GaussianComponent::new(alpha, 0.0, one),
                GaussianComponent::new(-alpha, 0.0, one),
                GaussianComponent::new(0.0, kappa, one),
                GaussianComponent::new(0.0, -kappa, one),
            ],
            sigma,
        )
    }

    pub fn components(&self) -> &[GaussianComponent] {
        &self.components
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// `Some(N)` once `normalized` has run, `None` otherwise.
    pub fn norm_constant(&self) -> Option<f64> {
        self.norm_constant
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// Overrides the action scale used when widths are reported as momenta.
    pub fn with_hbar(mut self, hbar: f64) -> Result<Self> {
        if !(hbar > 0.0) || !hbar.is_finite() {
            return Err(Error::InvalidRange(format!("hbar {hbar}")));
        }
        self.hbar = hbar;
        Ok(self)
    }

    pub fn is_normalized(&self) -> bool {
        self.norm_constant.is_some()
    }

    /// Largest |center| over the components.
    pub fn extreme_center(&self) -> f64 {
        self.components
            .iter()
            .map(|c| c.center.abs())
            .fold(0.0, f64::max)
    }

    /// Largest |carrier| over the components.
    pub fn extreme_carrier(&self) -> f64 {
        self.components
            .iter()
            .map(|c| c.carrier.abs())
            .fold(0.0, f64::max)
    }

    /// Computes `N = q^{-1/2}` from the Gram quadratic form
    /// `q = sum_ij conj(c_i) c_j G_ij` and returns the state with `N` set.
    ///
    /// The quadratic form handles coincident components (rank-deficient Gram)
    /// without special cases; it only fails when the form vanishes, i.e. the
    /// wavefunction is identically zero within tolerance.
    pub fn normalized(&self) -> Result<Self> {
        let q = kernels::gram_quadratic_form(self);
        // Scale reference: the diagonal contribution, always positive.
        let scale: f64 = self
            .components
            .iter()
            .map(|c| c.amplitude.norm_sqr())
            .sum::<f64>()
            * (2.0 * std::f64::consts::PI).sqrt()
            * self.sigma;
        if q <= 1e-14 * scale {
            return Err(Error::DegenerateState);
        }
        let mut out = self.clone();
        out.norm_constant = Some(1.0 / q.sqrt());
        Ok(out)
    }

    /// Applies the phase-space displacement `U = e^{i delta_k x} T_{delta_x}`:
    /// centers shift by `delta_x`, carriers by `delta_k`, and each amplitude
    /// picks up `e^{-i k delta_x}` (its old carrier), which keeps the operation
    /// unitary when carriers differ across components. A set norm constant is
    /// preserved.
    pub fn displaced(&self, delta_x: f64, delta_k: f64) -> Self {
        let mut out = self.clone();
        for c in &mut out.components {
            c.amplitude *= Complex64::from_polar(1.0, -c.carrier * delta_x);
            c.center += delta_x;
            c.carrier += delta_k;
        }
        out
    }

    /// Applies the unitary squeeze `psi(x) -> sqrt(lambda) psi(lambda x)`:
    /// `sigma -> sigma/lambda`, centers scale by `1/lambda`, carriers by
    /// `lambda`. A set norm constant is rescaled by `sqrt(lambda)` so the
    /// state stays normalized. Uncertainty products are invariant.
    pub fn squeezed(&self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::NonPositiveLambda(lambda));
        }
        let mut out = self.clone();
        out.sigma /= lambda;
        for c in &mut out.components {
            c.center /= lambda;
            c.carrier *= lambda;
        }
        if let Some(n) = out.norm_constant {
            out.norm_constant = Some(n * lambda.sqrt());
        }
        Ok(out)
    }

    /// Effective normalization applied by `evaluate`: `N` if set, else 1.
    pub fn effective_norm(&self) -> f64 {
        self.norm_constant.unwrap_or(1.0)
    }

    /// Pointwise value `N * sum_j c_j exp(-(x-a_j)^2/(4 sigma^2)) e^{i k_j x}`.
    pub fn evaluate(&self, x: f64) -> Complex64 {
        let four_s2 = 4.0 * self.sigma * self.sigma;
        let mut acc = Complex64::new(0.0, 0.0);
        for c in &self.components {
            let d = x - c.center;
            let env = (-d * d / four_s2).exp();
            acc += c.amplitude * env * Complex64::from_polar(1.0, c.carrier * x);
        }
        self.effective_norm() * acc
    }

    /// Analytic spatial derivative: each component contributes the factor
    /// `(i k - (x - a)/(2 sigma^2))`. No finite differences anywhere.
    pub fn derivative(&self, x: f64) -> Complex64 {
        let two_s2 = 2.0 * self.sigma * self.sigma;
        let four_s2 = 2.0 * two_s2;
        let mut acc = Complex64::new(0.0, 0.0);
        for c in &self.components {
            let d = x - c.center;
            let env = (-d * d / four_s2).exp();
            let factor = Complex64::new(-d / two_s2, c.carrier);
            acc += c.amplitude * env * factor * Complex64::from_polar(1.0, c.carrier * x);
        }
        self.effective_norm() * acc
    }

    /// Samples the state on a uniform grid of `n` points over
    /// `[-half_width, half_width]`, auto-widened to `extreme center + 10 sigma`
    /// so the boundary values sit below 1e-10 of the peak.
    pub fn to_grid(&self, half_width: f64, n: usize) -> Result<GridState> {
        if !(half_width > 0.0) || !half_width.is_finite() {
            return Err(Error::InvalidRange(format!("half_width {half_width}")));
        }
        if n < 16 {
            return Err(Error::GridTooCoarse(format!("n = {n}, need at least 16")));
        }
        let hw = half_width.max(self.extreme_center() + 10.0 * self.sigma);
        let dx = 2.0 * hw / (n - 1) as f64;
        let max_dx = self.sigma / 4.0;
        if dx > max_dx {
            let needed = (2.0 * hw / max_dx).ceil() as usize + 1;
            return Err(Error::GridTooCoarse(format!(
                "dx = {dx:.6} exceeds sigma/4 = {max_dx:.6} over [-{hw:.3}, {hw:.3}]; need n >= {needed}"
            )));
        }
        let values: Vec<Complex64> = (0..n).map(|i| self.evaluate(-hw + dx * i as f64)).collect();
        Ok(GridState {
            x0: -hw,
            dx,
            values,
        })
    }
}

/// Uniform complex samples of a state; produced by `to_grid`.
///
/// Construction guarantees at least 16 samples and boundary magnitudes below
/// 1e-10 of the peak, so discrete sums over the grid approximate integrals
/// over the whole line.
#[derive(Debug, Clone, PartialEq)]
pub struct GridState {
    x0: f64,
    dx: f64,
    values: Vec<Complex64>,
}

impl GridState {
    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn x_at(&self, i: usize) -> f64 {
        self.x0 + self.dx * i as f64
    }
}
