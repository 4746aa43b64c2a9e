//! Numerical thresholds shared across the stack.
//!
//! Invertibility and Hermiticity decisions are made here and nowhere else, so
//! every caller observes the same notion of "singular".

/// Relative pivot floor for LU inversion: a matrix is declared singular when
/// some pivot falls below this multiple of the largest entry magnitude.
pub const SINGULARITY_REL: f64 = 1e-12;

/// Relative asymmetry allowed before a matrix is rejected as non-Hermitian.
pub const HERMITIAN_REL: f64 = 1e-10;

/// Default tolerance for exact algebraic identities checked in floating
/// point (block-inverse formulas, equivalence residuals, and the like).
pub const IDENTITY_TOL: f64 = 1e-9;
