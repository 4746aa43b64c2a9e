use thiserror::Error;

#[derive(Debug, Error)]
pub enum CalcError {
    #[error("point of norm {0:.3e} is outside the declared domain radius {1:.3e}")]
    OutsideDomain(f64, f64),

    #[error("evaluator failed: {0}")]
    Evaluator(String),

    #[error("off-diagonal block is not linear in the probe (deviation {0:.3e}); the evaluator is not fully matricial at this point")]
    NonlinearProbe(f64),

    #[error("iterated difference quotients disagree by {0:.3e} (tolerance {1:.1e})")]
    CoassociativityViolated(f64, f64),

    #[error("composition requires the inner family to vanish at the origin")]
    InnerConstantTerm,

    #[error("family shapes are incompatible: {0}")]
    FamilyShape(String),

    #[error(transparent)]
    Base(#[from] base_algebra::BaseError),

    #[error(transparent)]
    Nc(#[from] ncpoly::NcError),

    #[error(transparent)]
    Linalg(#[from] linalg_core::LinalgError),
}
