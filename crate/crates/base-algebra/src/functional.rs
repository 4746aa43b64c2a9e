use linalg_core::{cplx, Complex64, ComplexMatrix};

use crate::algebra::{AlgebraKind, BaseAlgebra};
use crate::error::BaseError;

/// Linear functional on the base algebra, stored through its dual matrix:
/// `φ(X) = Tr(X · Aᵗ) = Σ_pq X_pq A_pq`.
#[derive(Clone, Debug, PartialEq)]
pub struct Functional {
    algebra: BaseAlgebra,
    dual: ComplexMatrix,
}

impl Functional {
    pub fn new(algebra: BaseAlgebra, dual: ComplexMatrix) -> Result<Self, BaseError> {
        algebra.check_element(&dual)?;
        Ok(Functional { algebra, dual })
    }

    pub fn algebra(&self) -> BaseAlgebra {
        self.algebra
    }

    pub fn dual_matrix(&self) -> &ComplexMatrix {
        &self.dual
    }

    pub fn apply(&self, b: &ComplexMatrix) -> Complex64 {
        debug_assert_eq!(b.rows(), self.algebra.k);
        debug_assert_eq!(b.cols(), self.algebra.k);
        let mut acc = Complex64::new(0.0, 0.0);
        for p in 0..self.algebra.k {
            for q in 0..self.algebra.k {
                acc += b.get(p, q) * self.dual.get(p, q);
            }
        }
        acc
    }

    /// Value on the algebra unit.
    pub fn apply_identity(&self) -> Complex64 {
        self.dual.trace()
    }

    /// The functional `φ*` with `φ*(b) = conj(φ(b*))`; its dual matrix is
    /// the adjoint of `A` (so `φ_pq* = φ_qp` on matrix units).
    pub fn star(&self) -> Functional {
        Functional {
            algebra: self.algebra,
            dual: self.dual.adjoint(),
        }
    }

    pub fn is_hermitian(&self) -> bool {
        self.dual.max_abs_diff(&self.dual.adjoint()) <= 1e-12 * self.dual.max_abs().max(1.0)
    }

    /// Positivity of `φ` as a functional on the C*-algebra: equivalent to
    /// the dual matrix being positive semidefinite.
    pub fn is_positive(&self, tol: f64) -> bool {
        match self.dual.hermitian_min_eigenvalue() {
            Ok(lo) => lo >= -tol,
            Err(_) => false,
        }
    }

    pub fn scale(&self, z: Complex64) -> Functional {
        Functional {
            algebra: self.algebra,
            dual: self.dual.scale(z),
        }
    }

    pub fn add(&self, other: &Functional) -> Result<Functional, BaseError> {
        if self.algebra != other.algebra {
            return Err(BaseError::AlgebraMismatch);
        }
        Ok(Functional {
            algebra: self.algebra,
            dual: self.dual.add(&other.dual)?,
        })
    }
}

/// The canonical dual basis: `φ_pq` in lexicographic `(p,q)` order for the
/// full matrix algebra, the coordinate functionals `φ_j` for the diagonal
/// one. Dual to [`BaseAlgebra::canonical_basis`].
pub fn dual_basis(algebra: BaseAlgebra) -> Vec<Functional> {
    let k = algebra.k;
    match algebra.kind {
        AlgebraKind::FullMatrix => {
            let mut out = Vec::with_capacity(k * k);
            for p in 0..k {
                for q in 0..k {
                    out.push(Functional {
                        algebra,
                        dual: ComplexMatrix::matrix_unit(k, p, q),
                    });
                }
            }
            out
        }
        AlgebraKind::Diagonal => (0..k)
            .map(|j| Functional {
                algebra,
                dual: ComplexMatrix::matrix_unit(k, j, j),
            })
            .collect(),
    }
}

/// The distinguished unital functional: the normalized trace `X ↦ Tr(X)/k`
/// (for the diagonal kind, the average of the coordinates).
pub fn trace_state(algebra: BaseAlgebra) -> Functional {
    let k = algebra.k;
    Functional {
        algebra,
        dual: ComplexMatrix::scalar(k, cplx(1.0 / k as f64, 0.0)),
    }
}
