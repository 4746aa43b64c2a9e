//! Free probability with amalgamation over a finite-dimensional base:
//! asymptotic orthogonality of coordinate words of Haar-distributed
//! unitaries, Monte Carlo recovery of series coefficients, base-valued
//! Cauchy transforms with their Newton inversion, and R-transforms both as
//! analytic maps and as formal multilinear series.

mod coefficients;
mod config;
mod error;
mod expectation;
mod haar;
mod rtransform;
mod series;

pub use coefficients::{
    coefficient_csv, recover_coefficients_mc, CoefficientReport, CoefficientRow, RecoveryTarget,
    COEFF_CSV_HEADER,
};
pub use config::McConfig;
pub use error::FreeProbError;
pub use expectation::{ExpectationKind, ExpectationSetup, CONDITIONAL_TOL};
pub use haar::{
    exact_haar_limit, free_moment_oracle, haar_moment_estimate, haar_orthogonality_sweep,
    sample_unitary, HaarSample, McReport, McRow, MC_CSV_HEADER,
};
pub use rtransform::{
    cauchy_g, cauchy_g_jacobian, h_map, invert_l, r_transform, suggested_inversion_radius,
    NEWTON_MAX_ITERS, NEWTON_TOL,
};
pub use series::{free_sum_moments, r_transform_series, MomentFamily};
