use std::collections::BTreeMap;
use std::fmt;

use base_algebra::{dual_basis, AlgebraKind, BaseAlgebra, MatOverB};
use linalg_core::{Complex64, ComplexMatrix};
use serde::{Deserialize, Serialize};

use crate::error::NcError;
use crate::tensor::NCTensor;

/// Hard ceiling on word length produced by symbolic arithmetic. Exceeding it
/// is an error, never silent truncation. Antisymmetrization assembles its
/// words directly and carries its own (permutation-count) bound instead.
pub const DEGREE_CAP: usize = 12;

/// Index of `φ_j*` in the canonical dual basis: transposes the `(p,q)` pair
/// for the full matrix algebra, fixes coordinates for the diagonal one.
pub fn star_index(algebra: BaseAlgebra, j: usize) -> usize {
    match algebra.kind {
        AlgebraKind::FullMatrix => {
            let (p, q) = (j / algebra.k, j % algebra.k);
            q * algebra.k + p
        }
        AlgebraKind::Diagonal => j,
    }
}

/// Polynomial in the free algebra on the dual-basis generators.
///
/// Terms map words (sequences of dual-basis indices, empty = unit) to
/// complex coefficients; exact zeros are pruned.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PolyJson", into = "PolyJson")]
pub struct NCPoly {
    algebra: BaseAlgebra,
    terms: BTreeMap<Vec<usize>, Complex64>,
}

impl NCPoly {
    pub fn zero(algebra: BaseAlgebra) -> Self {
        NCPoly {
            algebra,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(algebra: BaseAlgebra) -> Self {
        Self::constant(algebra, Complex64::new(1.0, 0.0))
    }

    pub fn constant(algebra: BaseAlgebra, c: Complex64) -> Self {
        let mut terms = BTreeMap::new();
        if c.norm() != 0.0 {
            terms.insert(Vec::new(), c);
        }
        NCPoly { algebra, terms }
    }

    /// The generator `z(φ_j)`.
    pub fn generator(algebra: BaseAlgebra, j: usize) -> Result<Self, NcError> {
        Self::monomial(algebra, vec![j], Complex64::new(1.0, 0.0))
    }

    pub fn monomial(algebra: BaseAlgebra, word: Vec<usize>, c: Complex64) -> Result<Self, NcError> {
        let d = algebra.dim();
        if let Some(&bad) = word.iter().find(|&&j| j >= d) {
            return Err(NcError::LetterOutOfRange(bad, d));
        }
        let mut terms = BTreeMap::new();
        if c.norm() != 0.0 {
            terms.insert(word, c);
        }
        Ok(NCPoly { algebra, terms })
    }

    pub(crate) fn from_terms(
        algebra: BaseAlgebra,
        terms: BTreeMap<Vec<usize>, Complex64>,
    ) -> Self {
        let terms = terms.into_iter().filter(|(_, c)| c.norm() != 0.0).collect();
        NCPoly { algebra, terms }
    }

    pub fn algebra(&self) -> BaseAlgebra {
        self.algebra
    }

    pub fn terms(&self) -> &BTreeMap<Vec<usize>, Complex64> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest word length present, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Vec::len).max()
    }

    pub fn constant_term(&self) -> Complex64 {
        self.terms
            .get(&Vec::new() as &Vec<usize>)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// The degree-`m` homogeneous part.
    pub fn graded_component(&self, m: usize) -> NCPoly {
        NCPoly {
            algebra: self.algebra,
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.len() == m)
                .map(|(w, c)| (w.clone(), *c))
                .collect(),
        }
    }

    pub fn add(&self, other: &NCPoly) -> Result<NCPoly, NcError> {
        if self.algebra != other.algebra {
            return Err(NcError::AlgebraMismatch);
        }
        let mut terms = self.terms.clone();
        for (w, c) in &other.terms {
            let slot = terms.entry(w.clone()).or_insert(Complex64::new(0.0, 0.0));
            *slot += *c;
            if slot.norm() == 0.0 {
                terms.remove(w);
            }
        }
        Ok(NCPoly {
            algebra: self.algebra,
            terms,
        })
    }

    pub fn sub(&self, other: &NCPoly) -> Result<NCPoly, NcError> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, z: Complex64) -> NCPoly {
        NCPoly::from_terms(
            self.algebra,
            self.terms.iter().map(|(w, c)| (w.clone(), *c * z)).collect(),
        )
    }

    /// Free product (word concatenation); errors past [`DEGREE_CAP`].
    pub fn try_mul(&self, other: &NCPoly) -> Result<NCPoly, NcError> {
        if self.algebra != other.algebra {
            return Err(NcError::AlgebraMismatch);
        }
        let mut terms: BTreeMap<Vec<usize>, Complex64> = BTreeMap::new();
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                let len = wa.len() + wb.len();
                if len > DEGREE_CAP {
                    return Err(NcError::DegreeCapExceeded(len, DEGREE_CAP));
                }
                let mut w = Vec::with_capacity(len);
                w.extend_from_slice(wa);
                w.extend_from_slice(wb);
                let slot = terms.entry(w).or_insert(Complex64::new(0.0, 0.0));
                *slot += *ca * *cb;
            }
        }
        Ok(NCPoly::from_terms(self.algebra, terms))
    }

    pub fn pow(&self, e: usize) -> Result<NCPoly, NcError> {
        let mut acc = NCPoly::one(self.algebra);
        for _ in 0..e {
            acc = acc.try_mul(self)?;
        }
        Ok(acc)
    }

    /// Fully matricial evaluation: each generator becomes the scalar
    /// `n × n` matrix of entrywise functional values; words multiply them.
    pub fn evaluate(&self, beta: &MatOverB) -> Result<ComplexMatrix, NcError> {
        if beta.algebra() != self.algebra {
            return Err(NcError::AlgebraMismatch);
        }
        let n = beta.level();
        let duals = dual_basis(self.algebra);
        let mut images: Vec<Option<ComplexMatrix>> = vec![None; duals.len()];
        let mut out = ComplexMatrix::zeros(n, n);
        for (word, c) in &self.terms {
            let mut acc: Option<ComplexMatrix> = None;
            for &j in word {
                if images[j].is_none() {
                    images[j] = Some(beta.apply_functional(&duals[j])?);
                }
                let img = images[j].as_ref().unwrap();
                acc = Some(match acc {
                    None => img.clone(),
                    Some(m) => m.multiply(img).expect("square same-size factors"),
                });
            }
            let term = match acc {
                None => ComplexMatrix::scalar(n, *c),
                Some(m) => m.scale(*c),
            };
            out = out.add(&term).expect("same shape");
        }
        Ok(out)
    }

    /// Symbolic difference quotient: the derivation into the two-fold tensor
    /// algebra fixed by `∂ z(φ) = φ(1)·(1 ⊗ 1)`.
    pub fn symbolic_derivative(&self) -> NCTensor {
        let unit_values: Vec<Complex64> = dual_basis(self.algebra)
            .iter()
            .map(|f| f.apply_identity())
            .collect();
        let mut out = NCTensor::zero(self.algebra);
        for (word, c) in &self.terms {
            for i in 0..word.len() {
                let u = unit_values[word[i]];
                if u.norm() == 0.0 {
                    continue;
                }
                out.add_term(word[..i].to_vec(), word[i + 1..].to_vec(), *c * u);
            }
        }
        out
    }

    /// The grading map: scales every degree-`m` word by `m + 1` (so the
    /// constant term is fixed).
    pub fn coderivation_lambda(&self) -> NCPoly {
        NCPoly::from_terms(
            self.algebra,
            self.terms
                .iter()
                .map(|(w, c)| {
                    let factor = (w.len() + 1) as f64;
                    (w.clone(), *c * Complex64::new(factor, 0.0))
                })
                .collect(),
        )
    }

    /// Conjugate-linear antiautomorphism: reverses words, stars each
    /// generator index, conjugates coefficients.
    pub fn star(&self) -> NCPoly {
        NCPoly::from_terms(
            self.algebra,
            self.terms
                .iter()
                .map(|(w, c)| {
                    let sw: Vec<usize> =
                        w.iter().rev().map(|&j| star_index(self.algebra, j)).collect();
                    (sw, c.conj())
                })
                .collect(),
        )
    }

    /// Largest coefficient difference over the union of words.
    pub fn max_term_diff(&self, other: &NCPoly) -> f64 {
        let mut worst = 0.0f64;
        for (w, c) in &self.terms {
            let d = other.terms.get(w).copied().unwrap_or(Complex64::new(0.0, 0.0));
            worst = worst.max((*c - d).norm());
        }
        for (w, c) in &other.terms {
            if !self.terms.contains_key(w) {
                worst = worst.max(c.norm());
            }
        }
        worst
    }

    pub fn is_close_to(&self, other: &NCPoly, tol: f64) -> bool {
        self.algebra == other.algebra && self.max_term_diff(other) <= tol
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("polynomial serialization is total")
    }

    pub fn from_json_str(s: &str) -> Result<Self, NcError> {
        serde_json::from_str(s).map_err(|e| NcError::Json(e.to_string()))
    }
}

impl fmt::Display for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (w, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({:.6}{:+.6}i)", c.re, c.im)?;
            for &j in w {
                write!(f, "·z{j}")?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    word: Vec<usize>,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    algebra: BaseAlgebra,
    terms: Vec<TermJson>,
}

impl From<NCPoly> for PolyJson {
    fn from(p: NCPoly) -> Self {
        PolyJson {
            algebra: p.algebra,
            terms: p
                .terms
                .into_iter()
                .map(|(word, c)| TermJson {
                    word,
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        }
    }
}

impl TryFrom<PolyJson> for NCPoly {
    type Error = NcError;

    fn try_from(j: PolyJson) -> Result<Self, NcError> {
        let d = j.algebra.dim();
        let mut terms = BTreeMap::new();
        for t in j.terms {
            if let Some(&bad) = t.word.iter().find(|&&x| x >= d) {
                return Err(NcError::LetterOutOfRange(bad, d));
            }
            let c = Complex64::new(t.re, t.im);
            if c.norm() != 0.0 {
                let slot = terms.entry(t.word).or_insert(Complex64::new(0.0, 0.0));
                *slot += c;
            }
        }
        Ok(NCPoly::from_terms(j.algebra, terms))
    }
}
