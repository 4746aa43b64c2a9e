use base_algebra::BaseError;
use linalg_core::LinalgError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GrassError {
    #[error("operands live over different base algebras")]
    AlgebraMismatch,
    #[error("level mismatch: {0} vs {1}")]
    LevelMismatch(usize, usize),
    #[error("representative matrix is not invertible")]
    NotInvertible,
    #[error("point is outside the resolvent set")]
    NotInResolventSet,
    #[error("probe point left the resolvent set")]
    ProbeFailure,
    #[error("affine part undefined: the b-column is not invertible")]
    NotAffine,
    #[error("shape error: {0}")]
    Shape(String),
    #[error(transparent)]
    Base(#[from] BaseError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
