use base_algebra::BaseError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum NcError {
    #[error("operands live over different base algebras")]
    AlgebraMismatch,

    #[error("degree {0} exceeds the symbolic degree cap {1}")]
    DegreeCapExceeded(usize, usize),

    #[error("letter {0} out of range for a dual basis of size {1}")]
    LetterOutOfRange(usize, usize),

    #[error("antisymmetrization requires pairwise distinct words")]
    DuplicateWord,

    #[error("antisymmetrization words must share one degree")]
    MixedDegrees,

    #[error("antisymmetrization over {0} monomials exceeds the supported maximum {1}")]
    TooManyMonomials(usize, usize),

    #[error("no witness found within the search budget: {0}")]
    SearchFailed(String),

    #[error(transparent)]
    Base(#[from] BaseError),

    #[error(transparent)]
    Linalg(#[from] linalg_core::LinalgError),

    #[error("malformed polynomial JSON: {0}")]
    Json(String),
}
