use linalg_core::{cplx, ComplexMatrix, Complex64, Rng};
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::BaseError;
use crate::functional::dual_basis;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlgebraKind {
    /// All `k × k` complex matrices.
    FullMatrix,
    /// Diagonal `k × k` matrices, i.e. k copies of the scalars.
    Diagonal,
}

/// Descriptor of the base algebra. Elements are `k × k` matrices; the
/// diagonal kind admits only diagonal ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseAlgebra {
    pub kind: AlgebraKind,
    pub k: usize,
}

impl BaseAlgebra {
    pub fn full_matrix(k: usize) -> Self {
        assert!(k >= 1, "algebra size must be at least 1");
        BaseAlgebra {
            kind: AlgebraKind::FullMatrix,
            k,
        }
    }

    pub fn diagonal(k: usize) -> Self {
        assert!(k >= 1, "algebra size must be at least 1");
        BaseAlgebra {
            kind: AlgebraKind::Diagonal,
            k,
        }
    }

    /// Dimension as a complex vector space: `k²` or `k`.
    pub fn dim(&self) -> usize {
        match self.kind {
            AlgebraKind::FullMatrix => self.k * self.k,
            AlgebraKind::Diagonal => self.k,
        }
    }

    pub fn identity_element(&self) -> ComplexMatrix {
        ComplexMatrix::identity(self.k)
    }

    /// Basis dual to [`dual_basis`](crate::dual_basis): matrix units `e_pq`
    /// in lexicographic `(p,q)` order, or the diagonal units `e_jj`.
    pub fn canonical_basis(&self) -> Vec<ComplexMatrix> {
        match self.kind {
            AlgebraKind::FullMatrix => {
                let mut out = Vec::with_capacity(self.k * self.k);
                for p in 0..self.k {
                    for q in 0..self.k {
                        out.push(ComplexMatrix::matrix_unit(self.k, p, q));
                    }
                }
                out
            }
            AlgebraKind::Diagonal => (0..self.k)
                .map(|j| ComplexMatrix::matrix_unit(self.k, j, j))
                .collect(),
        }
    }

    pub fn element_is_valid(&self, b: &ComplexMatrix) -> bool {
        if b.rows() != self.k || b.cols() != self.k {
            return false;
        }
        match self.kind {
            AlgebraKind::FullMatrix => true,
            AlgebraKind::Diagonal => {
                for i in 0..self.k {
                    for j in 0..self.k {
                        if i != j && b.get(i, j).norm() != 0.0 {
                            return false;
                        }
                    }
                }
                true
            }
        }
    }

    pub fn check_element(&self, b: &ComplexMatrix) -> Result<(), BaseError> {
        if self.element_is_valid(b) {
            Ok(())
        } else {
            let hint = match self.kind {
                AlgebraKind::FullMatrix => "",
                AlgebraKind::Diagonal => " diagonal",
            };
            Err(BaseError::InvalidElement(self.k, hint))
        }
    }

    /// Coordinates of `b` in the canonical basis, read off by the dual basis.
    pub fn coords(&self, b: &ComplexMatrix) -> Vec<Complex64> {
        dual_basis(*self).iter().map(|f| f.apply(b)).collect()
    }

    pub fn from_coords(&self, coords: &[Complex64]) -> ComplexMatrix {
        assert_eq!(coords.len(), self.dim(), "coordinate count mismatch");
        let basis = self.canonical_basis();
        let mut out = ComplexMatrix::zeros(self.k, self.k);
        for (c, e) in coords.iter().zip(basis.iter()) {
            out = out.add(&e.scale(*c)).unwrap();
        }
        out
    }

    /// Random element with entries uniform in the centered square of the
    /// given half-width.
    pub fn random_element(&self, rng: &mut Rng, scale: f64) -> ComplexMatrix {
        match self.kind {
            AlgebraKind::FullMatrix => ComplexMatrix::from_fn(self.k, self.k, |_, _| {
                cplx(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale))
            }),
            AlgebraKind::Diagonal => {
                let d: Vec<Complex64> = (0..self.k)
                    .map(|_| cplx(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale)))
                    .collect();
                ComplexMatrix::diagonal(&d)
            }
        }
    }

    pub fn random_hermitian_element(&self, rng: &mut Rng, scale: f64) -> ComplexMatrix {
        match self.kind {
            AlgebraKind::FullMatrix => {
                let b = self.random_element(rng, scale);
                b.add(&b.adjoint()).unwrap().scale(cplx(0.5, 0.0))
            }
            AlgebraKind::Diagonal => {
                let d: Vec<Complex64> = (0..self.k)
                    .map(|_| cplx(rng.gen_range(-scale..scale), 0.0))
                    .collect();
                ComplexMatrix::diagonal(&d)
            }
        }
    }
}
