use num_complex::Complex64;
use thiserror::Error;

/// Everything that can go wrong across states, kernels, analysis, and the oracle.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("sigma must be positive and finite, got {0}")]
    NonPositiveSigma(f64),
    #[error("alpha must be positive and finite, got {0}")]
    NonPositiveAlpha(f64),
    #[error("lambda must be positive and finite, got {0}")]
    NonPositiveLambda(f64),
    #[error("state has no components")]
    EmptyState,
    #[error("state norm vanishes within tolerance; cannot normalize")]
    DegenerateState,
    #[error("moment kernel requires matched carriers, got {carrier_a} and {carrier_b}")]
    CarrierMismatch { carrier_a: f64, carrier_b: f64 },
    #[error("operation requires a normalized state; call normalized() first")]
    NotNormalized,
    #[error("assembled variance {0} is negative beyond tolerance")]
    NegativeVariance(f64),
    #[error("no overlap zero in (0, {k_max}]")]
    NoRoot { k_max: f64 },
    #[error("invalid range: {0}")]
    InvalidRange(String),
    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),
    #[error("quadrature hit max depth: estimate {estimate}, error bound {error_bound}")]
    MaxDepthExceeded {
        estimate: Complex64,
        error_bound: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
