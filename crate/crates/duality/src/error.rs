use base_algebra::BaseError;
use grassmann::GrassError;
use linalg_core::LinalgError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DualityError {
    #[error("functional or point does not live over the setup's algebras")]
    AlgebraMismatch,
    #[error("the reference point must sit at level 1, got level {0}")]
    BadReferenceLevel(usize),
    #[error("embedding is not a unital *-homomorphism (residual {0:.3e})")]
    BadEmbedding(f64),
    #[error("reference point is not hermitian")]
    NotHermitian,
    #[error("shape error: {0}")]
    Shape(String),
    #[error(transparent)]
    Grass(#[from] GrassError),
    #[error(transparent)]
    Base(#[from] BaseError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
