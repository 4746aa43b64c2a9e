use std::collections::BTreeMap;

use base_algebra::{BaseAlgebra, MatOverB};
use linalg_core::{Complex64, ComplexMatrix};

use crate::error::NcError;
use crate::poly::{star_index, NCPoly, DEGREE_CAP};

/// Element of the two-fold tensor square of the free algebra: a map from
/// pairs of words to coefficients. Codomain of the symbolic difference
/// quotient.
#[derive(Clone, Debug, PartialEq)]
pub struct NCTensor {
    algebra: BaseAlgebra,
    terms: BTreeMap<(Vec<usize>, Vec<usize>), Complex64>,
}

impl NCTensor {
    pub fn zero(algebra: BaseAlgebra) -> Self {
        NCTensor {
            algebra,
            terms: BTreeMap::new(),
        }
    }

    /// `p ⊗ q` as a tensor.
    pub fn outer(p: &NCPoly, q: &NCPoly) -> Result<Self, NcError> {
        if p.algebra() != q.algebra() {
            return Err(NcError::AlgebraMismatch);
        }
        let mut out = NCTensor::zero(p.algebra());
        for (wp, cp) in p.terms() {
            for (wq, cq) in q.terms() {
                out.add_term(wp.clone(), wq.clone(), *cp * *cq);
            }
        }
        Ok(out)
    }

    pub fn algebra(&self) -> BaseAlgebra {
        self.algebra
    }

    pub fn terms(&self) -> &BTreeMap<(Vec<usize>, Vec<usize>), Complex64> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, left: Vec<usize>, right: Vec<usize>, c: Complex64) {
        if c.norm() == 0.0 {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry((left, right)) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().norm() == 0.0 {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &NCTensor) -> Result<NCTensor, NcError> {
        if self.algebra != other.algebra {
            return Err(NcError::AlgebraMismatch);
        }
        let mut out = self.clone();
        for ((l, r), c) in &other.terms {
            out.add_term(l.clone(), r.clone(), *c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &NCTensor) -> Result<NCTensor, NcError> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, z: Complex64) -> NCTensor {
        let mut out = NCTensor::zero(self.algebra);
        for ((l, r), c) in &self.terms {
            out.add_term(l.clone(), r.clone(), *c * z);
        }
        out
    }

    /// Factorwise product `(a ⊗ b)(c ⊗ d) = ac ⊗ bd`.
    pub fn mul(&self, other: &NCTensor) -> Result<NCTensor, NcError> {
        if self.algebra != other.algebra {
            return Err(NcError::AlgebraMismatch);
        }
        let mut out = NCTensor::zero(self.algebra);
        for ((la, ra), ca) in &self.terms {
            for ((lb, rb), cb) in &other.terms {
                let ll = la.len() + lb.len();
                let rl = ra.len() + rb.len();
                if ll > DEGREE_CAP || rl > DEGREE_CAP {
                    return Err(NcError::DegreeCapExceeded(ll.max(rl), DEGREE_CAP));
                }
                let mut l = Vec::with_capacity(ll);
                l.extend_from_slice(la);
                l.extend_from_slice(lb);
                let mut r = Vec::with_capacity(rl);
                r.extend_from_slice(ra);
                r.extend_from_slice(rb);
                out.add_term(l, r, *ca * *cb);
            }
        }
        Ok(out)
    }

    /// Swap the two tensor factors.
    pub fn swap_factors(&self) -> NCTensor {
        let mut out = NCTensor::zero(self.algebra);
        for ((l, r), c) in &self.terms {
            out.add_term(r.clone(), l.clone(), *c);
        }
        out
    }

    /// Factorwise star with conjugated coefficients: `(a ⊗ b)* = a* ⊗ b*`.
    pub fn star(&self) -> NCTensor {
        let mut out = NCTensor::zero(self.algebra);
        for ((l, r), c) in &self.terms {
            let sl: Vec<usize> = l.iter().rev().map(|&j| star_index(self.algebra, j)).collect();
            let sr: Vec<usize> = r.iter().rev().map(|&j| star_index(self.algebra, j)).collect();
            out.add_term(sl, sr, c.conj());
        }
        out
    }

    /// `(Λ ⊗ id + id ⊗ Λ)` applied termwise: the word pair `(u, v)` is
    /// scaled by `(|u| + 1) + (|v| + 1)`.
    pub fn grading_both(&self) -> NCTensor {
        let mut out = NCTensor::zero(self.algebra);
        for ((l, r), c) in &self.terms {
            let factor = (l.len() + r.len() + 2) as f64;
            out.add_term(l.clone(), r.clone(), *c * Complex64::new(factor, 0.0));
        }
        out
    }

    /// `(id ⊗ ∂)`: split the right factor.
    pub fn split_right(&self) -> NCTensor3 {
        let unit_values: Vec<Complex64> = base_algebra::dual_basis(self.algebra)
            .iter()
            .map(|f| f.apply_identity())
            .collect();
        let mut out = NCTensor3::zero(self.algebra);
        for ((l, r), c) in &self.terms {
            for i in 0..r.len() {
                let u = unit_values[r[i]];
                if u.norm() == 0.0 {
                    continue;
                }
                out.add_term(l.clone(), r[..i].to_vec(), r[i + 1..].to_vec(), *c * u);
            }
        }
        out
    }

    /// `(∂ ⊗ id)`: split the left factor.
    pub fn split_left(&self) -> NCTensor3 {
        let unit_values: Vec<Complex64> = base_algebra::dual_basis(self.algebra)
            .iter()
            .map(|f| f.apply_identity())
            .collect();
        let mut out = NCTensor3::zero(self.algebra);
        for ((l, r), c) in &self.terms {
            for i in 0..l.len() {
                let u = unit_values[l[i]];
                if u.norm() == 0.0 {
                    continue;
                }
                out.add_term(l[..i].to_vec(), l[i + 1..].to_vec(), r.clone(), *c * u);
            }
        }
        out
    }

    /// Numeric pairing against an off-diagonal probe:
    /// `Σ c · u(β₁) · t · v(β₂)` where `t` is `n₁ × n₂`.
    pub fn evaluate_bilinear(
        &self,
        beta1: &MatOverB,
        beta2: &MatOverB,
        t: &ComplexMatrix,
    ) -> Result<ComplexMatrix, NcError> {
        let mut out = ComplexMatrix::zeros(beta1.level(), beta2.level());
        for ((l, r), c) in &self.terms {
            let lw = NCPoly::monomial(self.algebra, l.clone(), Complex64::new(1.0, 0.0))?;
            let rw = NCPoly::monomial(self.algebra, r.clone(), Complex64::new(1.0, 0.0))?;
            let lm = lw.evaluate(beta1)?;
            let rm = rw.evaluate(beta2)?;
            let term = lm.multiply(t)?.multiply(&rm)?.scale(*c);
            out = out.add(&term)?;
        }
        Ok(out)
    }

    pub fn max_term_diff(&self, other: &NCTensor) -> f64 {
        let mut worst = 0.0f64;
        for (k, c) in &self.terms {
            let d = other.terms.get(k).copied().unwrap_or(Complex64::new(0.0, 0.0));
            worst = worst.max((*c - d).norm());
        }
        for (k, c) in &other.terms {
            if !self.terms.contains_key(k) {
                worst = worst.max(c.norm());
            }
        }
        worst
    }

    pub fn is_close_to(&self, other: &NCTensor, tol: f64) -> bool {
        self.algebra == other.algebra && self.max_term_diff(other) <= tol
    }
}

/// Element of the three-fold tensor power; codomain of the iterated
/// difference quotient.
#[derive(Clone, Debug, PartialEq)]
pub struct NCTensor3 {
    algebra: BaseAlgebra,
    terms: BTreeMap<(Vec<usize>, Vec<usize>, Vec<usize>), Complex64>,
}

impl NCTensor3 {
    pub fn zero(algebra: BaseAlgebra) -> Self {
        NCTensor3 {
            algebra,
            terms: BTreeMap::new(),
        }
    }

    pub fn add_term(&mut self, a: Vec<usize>, b: Vec<usize>, c: Vec<usize>, z: Complex64) {
        if z.norm() == 0.0 {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry((a, b, c)) {
            Entry::Vacant(v) => {
                v.insert(z);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += z;
                if o.get().norm() == 0.0 {
                    o.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> &BTreeMap<(Vec<usize>, Vec<usize>, Vec<usize>), Complex64> {
        &self.terms
    }

    pub fn max_term_diff(&self, other: &NCTensor3) -> f64 {
        let mut worst = 0.0f64;
        for (k, c) in &self.terms {
            let d = other.terms.get(k).copied().unwrap_or(Complex64::new(0.0, 0.0));
            worst = worst.max((*c - d).norm());
        }
        for (k, c) in &other.terms {
            if !self.terms.contains_key(k) {
                worst = worst.max(c.norm());
            }
        }
        worst
    }

    pub fn is_close_to(&self, other: &NCTensor3, tol: f64) -> bool {
        self.algebra == other.algebra && self.max_term_diff(other) <= tol
    }

    /// `Σ c · u(β₁) · t₁₂ · v(β₂) · t₂₃ · w(β₃)`.
    pub fn evaluate_trilinear(
        &self,
        beta1: &MatOverB,
        beta2: &MatOverB,
        beta3: &MatOverB,
        t12: &ComplexMatrix,
        t23: &ComplexMatrix,
    ) -> Result<ComplexMatrix, NcError> {
        let mut out = ComplexMatrix::zeros(beta1.level(), beta3.level());
        for ((a, b, c), z) in &self.terms {
            let one = Complex64::new(1.0, 0.0);
            let am = NCPoly::monomial(self.algebra, a.clone(), one)?.evaluate(beta1)?;
            let bm = NCPoly::monomial(self.algebra, b.clone(), one)?.evaluate(beta2)?;
            let cm = NCPoly::monomial(self.algebra, c.clone(), one)?.evaluate(beta3)?;
            let term = am
                .multiply(t12)?
                .multiply(&bm)?
                .multiply(t23)?
                .multiply(&cm)?
                .scale(*z);
            out = out.add(&term)?;
        }
        Ok(out)
    }
}
