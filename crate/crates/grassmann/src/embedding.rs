use base_algebra::{BaseAlgebra, MatOverB};
use linalg_core::ComplexMatrix;

use crate::error::GrassError;

/// Unital *-embedding of the base algebra into a plain matrix algebra
/// `E = M_d` with `d = k·scale`: an element `x` goes to `x ⊗ I_scale`
/// (diagonal elements are realized as diagonal matrices first).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Embedding {
    source: BaseAlgebra,
    scale: usize,
}

impl Embedding {
    pub fn new(source: BaseAlgebra, scale: usize) -> Result<Self, GrassError> {
        if scale == 0 {
            return Err(GrassError::Shape("embedding scale must be positive".into()));
        }
        Ok(Embedding { source, scale })
    }

    pub fn source(&self) -> BaseAlgebra {
        self.source
    }

    pub fn scale(&self) -> usize {
        self.scale
    }

    /// Size of the target matrix algebra.
    pub fn target_dim(&self) -> usize {
        self.source.identity_element().rows() * self.scale
    }

    pub fn target_algebra(&self) -> BaseAlgebra {
        BaseAlgebra::full_matrix(self.target_dim())
    }

    /// Image of a single algebra element as a `d × d` matrix.
    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix, GrassError> {
        self.source.check_element(x)?;
        Ok(x.kron(&ComplexMatrix::identity(self.scale)))
    }

    /// Entrywise image of a level-`n` matrix, as a dense `nd × nd` matrix.
    pub fn apply_level(&self, m: &MatOverB) -> Result<ComplexMatrix, GrassError> {
        if m.algebra() != self.source {
            return Err(GrassError::AlgebraMismatch);
        }
        let n = m.level();
        let d = self.target_dim();
        let mut out = ComplexMatrix::zeros(n * d, n * d);
        for i in 0..n {
            for j in 0..n {
                let img = self.apply(&m.extract_entry(i, j)?)?;
                out.set_block(i * d, j * d, &img);
            }
        }
        Ok(out)
    }
}
