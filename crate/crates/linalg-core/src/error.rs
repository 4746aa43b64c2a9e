use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),

    #[error("matrix is singular at the configured pivot threshold")]
    Singular,

    #[error("matrix is not square: {0}x{1}")]
    NotSquare(usize, usize),

    #[error("matrix is not Hermitian (asymmetry {0:.3e})")]
    NotHermitian(f64),

    #[error("non-finite entry at ({0}, {1})")]
    NonFinite(usize, usize),

    #[error("rows of unequal length")]
    RaggedRows,
}
