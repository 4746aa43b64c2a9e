use thiserror::Error;

#[derive(Debug, Error)]
pub enum FreeProbError {
    #[error("mismatched base algebras")]
    AlgebraMismatch,
    #[error("bad Monte Carlo configuration: {0}")]
    BadConfig(String),
    #[error("argument outside the domain: {0}")]
    OutOfDomain(String),
    #[error("Newton iteration did not converge within {0} steps")]
    NoConvergence(usize),
    #[error("conditional expectation violates {0} (residual {1:.3e})")]
    NotConditional(&'static str, f64),
    #[error("shape error: {0}")]
    Shape(String),
    #[error(transparent)]
    Base(#[from] base_algebra::BaseError),
    #[error(transparent)]
    Nc(#[from] ncpoly::NcError),
    #[error(transparent)]
    Calc(#[from] matricial_calculus::CalcError),
    #[error(transparent)]
    Linalg(#[from] linalg_core::LinalgError),
}
