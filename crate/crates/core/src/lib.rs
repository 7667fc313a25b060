//! Superpositions of equal-width Gaussian wavepackets, the closed-form
//! kernels that make every inner product and moment exact, and the analysis
//! built on top: uncertainty reports, displacement responses, orthogonality
//! shifts that undercut the spectral width, regime scans, and Wigner maps.
//!
//! The `oracle` module recomputes the same quantities by adaptive quadrature
//! over pointwise evaluations, sharing no code with the kernel path, and the
//! `verify` module compares the two end to end.
//!
//! ```
//! use subfourier::{SuperpositionState, analysis};
//!
//! let cat = SuperpositionState::cat(4.0, 1.0, 0.0).unwrap().normalized().unwrap();
//! let report = analysis::uncertainty_report(&cat).unwrap();
//! let hit = analysis::find_delta_star(&cat, analysis::auto_k_max(&cat)).unwrap();
//! assert!(hit.delta_star < report.delta_k); // orthogonal inside the width
//! ```

pub mod analysis;
pub mod error;
pub mod kernels;
pub mod oracle;
pub mod states;
pub mod verify;

pub use analysis::{
    auto_k_max, find_delta_star, overlap_response, overlap_response_2d, regime_scan,
    state_overlap, subfourier_ratio, uncertainty_k, uncertainty_report, uncertainty_x,
    wigner_grid, wigner_point, OrthogonalityResult, ScanRow, UncertaintyReport, WignerGrid,
};
pub use error::{Error, Result};
pub use kernels::{gram_matrix, pair_overlap, pair_p_moment, pair_x_moment, PairKey};
pub use oracle::{
    discrete_fourier_widths, eigen_residual, eigen_residual_for, integrate, numeric_moment,
    numeric_overlap, DftWidths, Moment, Quadrature, QuadratureSpec,
};
pub use states::{GaussianComponent, GridState, SuperpositionState};
pub use verify::{VerifyReport, run as run_verify};
