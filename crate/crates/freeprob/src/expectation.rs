use base_algebra::{AlgebraKind, BaseAlgebra};
use linalg_core::{cplx, ComplexMatrix};

use crate::error::FreeProbError;

pub const CONDITIONAL_TOL: f64 = 1e-12;

/// How the conditional expectation compresses `E = M_{k·s}` onto the copy
/// `b ↦ b ⊗ I_s` of the base algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpectationKind {
    /// Normalized partial trace over the inner factor.
    PartialTrace,
    /// Read one fixed inner coordinate (a vector-state slice per block).
    VectorSlot(usize),
}

/// A base algebra sitting inside a bigger matrix algebra together with a
/// conditional expectation onto it and one distinguished element `a`, whose
/// operator norm is the constant controlling every domain below.
pub struct ExpectationSetup {
    base: BaseAlgebra,
    scale: usize,
    kind: ExpectationKind,
    a: ComplexMatrix,
    norm_bound: f64,
}

impl ExpectationSetup {
    pub fn new(
        base: BaseAlgebra,
        scale: usize,
        kind: ExpectationKind,
        a: ComplexMatrix,
    ) -> Result<Self, FreeProbError> {
        if scale == 0 {
            return Err(FreeProbError::BadConfig("scale must be at least 1".into()));
        }
        if let ExpectationKind::VectorSlot(u) = kind {
            if u >= scale {
                return Err(FreeProbError::BadConfig(format!(
                    "slot {u} out of range for scale {scale}"
                )));
            }
        }
        let d = base.k * scale;
        if a.rows() != d || a.cols() != d {
            return Err(FreeProbError::Shape(format!(
                "element is {}×{} but the ambient algebra is {d}×{d}",
                a.rows(),
                a.cols()
            )));
        }
        let norm_bound = a.spectral_norm();
        let setup = ExpectationSetup {
            base,
            scale,
            kind,
            a,
            norm_bound,
        };
        setup.check_conditional()?;
        Ok(setup)
    }

    pub fn base(&self) -> BaseAlgebra {
        self.base
    }

    pub fn ambient_dim(&self) -> usize {
        self.base.k * self.scale
    }

    pub fn element(&self) -> &ComplexMatrix {
        &self.a
    }

    /// Operator norm of the distinguished element.
    pub fn norm_bound(&self) -> f64 {
        self.norm_bound
    }

    /// `b ⊗ I_s`.
    pub fn embed(&self, b: &ComplexMatrix) -> Result<ComplexMatrix, FreeProbError> {
        self.base.check_element(b)?;
        Ok(b.kron(&ComplexMatrix::identity(self.scale)))
    }

    /// The conditional expectation, landing in the base algebra.
    pub fn expect(&self, x: &ComplexMatrix) -> Result<ComplexMatrix, FreeProbError> {
        let d = self.ambient_dim();
        if x.rows() != d || x.cols() != d {
            return Err(FreeProbError::Shape(format!(
                "expected a {d}×{d} argument, got {}×{}",
                x.rows(),
                x.cols()
            )));
        }
        let k = self.base.k;
        let s = self.scale;
        let value = |i: usize, j: usize| match self.kind {
            ExpectationKind::PartialTrace => {
                let mut acc = cplx(0.0, 0.0);
                for u in 0..s {
                    acc += x.get(i * s + u, j * s + u);
                }
                acc / cplx(s as f64, 0.0)
            }
            ExpectationKind::VectorSlot(u) => x.get(i * s + u, j * s + u),
        };
        Ok(match self.base.kind {
            AlgebraKind::FullMatrix => ComplexMatrix::from_fn(k, k, value),
            AlgebraKind::Diagonal => {
                ComplexMatrix::from_fn(
                    k,
                    k,
                    |i, j| if i == j { value(i, j) } else { cplx(0.0, 0.0) },
                )
            }
        })
    }

    /// Unitality, idempotence, and bimodularity over the canonical basis.
    fn check_conditional(&self) -> Result<(), FreeProbError> {
        let d = self.ambient_dim();
        let id = ComplexMatrix::identity(d);
        let unital = self
            .expect(&id)?
            .max_abs_diff(&self.base.identity_element());
        if unital > CONDITIONAL_TOL {
            return Err(FreeProbError::NotConditional("unitality", unital));
        }
        let basis = self.base.canonical_basis();
        for b in &basis {
            let gap = self.expect(&self.embed(b)?)?.max_abs_diff(b);
            if gap > CONDITIONAL_TOL {
                return Err(FreeProbError::NotConditional("idempotence", gap));
            }
        }
        // bimodularity on basis sandwiches of ambient matrix units
        for b in &basis {
            for b2 in &basis {
                let lb = self.embed(b)?;
                let rb = self.embed(b2)?;
                for p in 0..d {
                    for q in 0..d {
                        let x = ComplexMatrix::matrix_unit(d, p, q);
                        let lhs = self.expect(&lb.multiply(&x)?.multiply(&rb)?)?;
                        let rhs = b.multiply(&self.expect(&x)?)?.multiply(b2)?;
                        let gap = lhs.max_abs_diff(&rhs);
                        if gap > CONDITIONAL_TOL {
                            return Err(FreeProbError::NotConditional("bimodularity", gap));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}
