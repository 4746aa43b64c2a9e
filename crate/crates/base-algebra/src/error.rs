use linalg_core::LinalgError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BaseError {
    #[error("operands live over different base algebras")]
    AlgebraMismatch,

    #[error("matricial levels differ: {0} vs {1}")]
    LevelMismatch(usize, usize),

    #[error("element is not a valid algebra element: expected {0}x{0}{1}")]
    InvalidElement(usize, &'static str),

    #[error("entry index ({0}, {1}) out of range for level {2}")]
    IndexOutOfRange(usize, usize, usize),

    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
