use base_algebra::BaseAlgebra;
use linalg_core::{cplx, Complex64, ComplexMatrix, Rng};
use matricial_calculus::CoefficientFamily;

use crate::error::FreeProbError;
use crate::expectation::ExpectationSetup;

fn decode_tuple(mut idx: usize, len: usize, d: usize) -> Vec<usize> {
    let mut w = vec![0usize; len];
    for slot in w.iter_mut().rev() {
        *slot = idx % d;
        idx /= d;
    }
    w
}

/// Base-valued moments of one noncommutative random variable:
/// `tensors[j]` holds `Φ(a g_{t₁} a g_{t₂} … g_{t_j} a)` on basis tuples, so
/// index `j` carries the moments with `j + 1` letters of the variable.
#[derive(Clone, Debug)]
pub struct MomentFamily {
    algebra: BaseAlgebra,
    tensors: Vec<Vec<ComplexMatrix>>,
}

impl MomentFamily {
    pub fn algebra(&self) -> BaseAlgebra {
        self.algebra
    }

    /// Largest number of variable letters covered.
    pub fn max_order(&self) -> usize {
        self.tensors.len()
    }

    pub fn tensor_entry(&self, slots: usize, tuple: &[usize]) -> &ComplexMatrix {
        let d = self.algebra.dim();
        let idx = tuple.iter().fold(0usize, |acc, &j| acc * d + j);
        &self.tensors[slots][idx]
    }

    /// Multilinear extension to arbitrary base elements.
    pub fn eval(&self, args: &[&ComplexMatrix]) -> Result<ComplexMatrix, FreeProbError> {
        let slots = args.len();
        if slots >= self.tensors.len() {
            return Err(FreeProbError::Shape(format!(
                "moment family covers {} letters but {} were requested",
                self.tensors.len(),
                slots + 1
            )));
        }
        let d = self.algebra.dim();
        let coords: Vec<Vec<Complex64>> = args.iter().map(|x| self.algebra.coords(x)).collect();
        let mut acc = ComplexMatrix::zeros(self.algebra.k, self.algebra.k);
        for (idx, entry) in self.tensors[slots].iter().enumerate() {
            let tuple = decode_tuple(idx, slots, d);
            let mut w = cplx(1.0, 0.0);
            for (s, &t) in tuple.iter().enumerate() {
                w *= coords[s][t];
                if w.norm() == 0.0 {
                    break;
                }
            }
            if w.norm() != 0.0 {
                acc = acc.add(&entry.scale(w))?;
            }
        }
        Ok(acc)
    }

    /// Moments of the distinguished element of a concrete setup, computed by
    /// direct products in the ambient algebra.
    pub fn from_setup(setup: &ExpectationSetup, orders: usize) -> Result<Self, FreeProbError> {
        let algebra = setup.base();
        let d = algebra.dim();
        let basis = algebra.canonical_basis();
        let embedded: Vec<ComplexMatrix> = basis
            .iter()
            .map(|g| setup.embed(g))
            .collect::<Result<_, _>>()?;
        let mut tensors = Vec::with_capacity(orders);
        for j in 0..orders {
            let count = d.pow(j as u32);
            let mut tensor = Vec::with_capacity(count);
            for idx in 0..count {
                let tuple = decode_tuple(idx, j, d);
                let mut prod = setup.element().clone();
                for &t in &tuple {
                    prod = prod.multiply(&embedded[t])?.multiply(setup.element())?;
                }
                tensor.push(setup.expect(&prod)?);
            }
            tensors.push(tensor);
        }
        Ok(MomentFamily { algebra, tensors })
    }

    /// Scalar moment sequence `φ(a), φ(a²), …` as a family over `B = C`.
    pub fn from_scalar_moments(moments: &[Complex64]) -> Self {
        let algebra = BaseAlgebra::full_matrix(1);
        let tensors = moments
            .iter()
            .map(|&m| vec![ComplexMatrix::scalar(1, m)])
            .collect();
        MomentFamily { algebra, tensors }
    }

    /// A commuting lift of a scalar moment sequence to any base algebra:
    /// `Φ(a b₁ a … b_j a) = φ(a^{j+1}) · b₁⋯b_j`.
    pub fn scalar_lift(algebra: BaseAlgebra, moments: &[Complex64]) -> Self {
        let d = algebra.dim();
        let basis = algebra.canonical_basis();
        let tensors = moments
            .iter()
            .enumerate()
            .map(|(j, &m)| {
                let count = d.pow(j as u32);
                (0..count)
                    .map(|idx| {
                        let tuple = decode_tuple(idx, j, d);
                        let mut prod = algebra.identity_element();
                        for &t in &tuple {
                            prod = prod.multiply(&basis[t]).expect("square factors");
                        }
                        prod.scale(m)
                    })
                    .collect()
            })
            .collect();
        MomentFamily { algebra, tensors }
    }

    /// Random family for formal-identity tests; entries shrink geometrically
    /// with the order so downstream series stay well scaled.
    pub fn random(algebra: BaseAlgebra, orders: usize, rng: &mut Rng, scale: f64) -> Self {
        let d = algebra.dim();
        let tensors = (0..orders)
            .map(|j| {
                let count = d.pow(j as u32);
                (0..count)
                    .map(|_| algebra.random_element(rng, scale.powi(j as i32 + 1)))
                    .collect()
            })
            .collect();
        MomentFamily { algebra, tensors }
    }

    pub fn max_abs_diff(&self, other: &MomentFamily) -> f64 {
        let mut worst = 0.0f64;
        for (a, b) in self.tensors.iter().zip(other.tensors.iter()) {
            for (x, y) in a.iter().zip(b.iter()) {
                worst = worst.max(x.max_abs_diff(y));
            }
        }
        worst
    }
}

/// Word `c₀ x₀ c₁ x₁ … x_{m-1} c_m` with base coefficients `c_t` and each
/// letter `x_t` drawn from the variable named by `sources[t]`.
struct MixedWord {
    coeffs: Vec<ComplexMatrix>,
    sources: Vec<usize>,
}

/// Joint moment of a mixed word under freeness with amalgamation: center
/// each maximal same-source block, use that the fully centered alternating
/// product has zero expectation, and recurse on the strictly shorter words
/// in which some blocks are collapsed to their expectations.
fn mixed_moment(
    families: &[&MomentFamily],
    word: &MixedWord,
) -> Result<ComplexMatrix, FreeProbError> {
    let m = word.sources.len();
    if m == 0 {
        return Ok(word.coeffs[0].clone());
    }
    // maximal runs of one source: (source, first letter, length)
    let mut blocks: Vec<(usize, usize, usize)> = Vec::new();
    for (t, &s) in word.sources.iter().enumerate() {
        match blocks.last_mut() {
            Some((src, _, len)) if *src == s => *len += 1,
            _ => blocks.push((s, t, 1)),
        }
    }
    let block_expect = |&(src, start, len): &(usize, usize, usize)| {
        let inner: Vec<&ComplexMatrix> = (1..len).map(|i| &word.coeffs[start + i]).collect();
        Ok::<_, FreeProbError>(word.coeffs[start].multiply(&families[src].eval(&inner)?)?)
    };
    if blocks.len() == 1 {
        return Ok(block_expect(&blocks[0])?.multiply(&word.coeffs[m])?);
    }
    let expects: Vec<ComplexMatrix> = blocks
        .iter()
        .map(block_expect)
        .collect::<Result<_, _>>()?;

    let q = blocks.len();
    let k = word.coeffs[0].rows();
    let mut acc = ComplexMatrix::zeros(k, k);
    // Φ(W₁…W_q) = -Σ_{V ⊊ [q]} (-1)^{q-|V|} Φ(word with blocks off V collapsed)
    for mask in 0..(1usize << q) - 1 {
        let mut coeffs = Vec::new();
        let mut sources = Vec::new();
        let mut pending = ComplexMatrix::identity(k);
        for (i, &(src, start, len)) in blocks.iter().enumerate() {
            if mask & (1 << i) != 0 {
                coeffs.push(pending.multiply(&word.coeffs[start])?);
                for t in start..start + len {
                    sources.push(src);
                    if t + 1 < start + len {
                        coeffs.push(word.coeffs[t + 1].clone());
                    }
                }
                pending = ComplexMatrix::identity(k);
            } else {
                pending = pending.multiply(&expects[i])?;
            }
        }
        coeffs.push(pending.multiply(&word.coeffs[m])?);
        let value = mixed_moment(families, &MixedWord { coeffs, sources })?;
        let kept = (mask as u32).count_ones() as usize;
        let sign = if (q - kept) % 2 == 0 { -1.0 } else { 1.0 };
        acc = acc.add(&value.scale(cplx(sign, 0.0)))?;
    }
    Ok(acc)
}

/// Moments of the sum of two variables that are free with amalgamation over
/// the base, computed from the two individual families alone.
pub fn free_sum_moments(
    first: &MomentFamily,
    second: &MomentFamily,
    orders: usize,
) -> Result<MomentFamily, FreeProbError> {
    if first.algebra != second.algebra {
        return Err(FreeProbError::AlgebraMismatch);
    }
    if first.max_order() < orders || second.max_order() < orders {
        return Err(FreeProbError::Shape(format!(
            "need both families up to {orders} letters"
        )));
    }
    let algebra = first.algebra;
    let d = algebra.dim();
    let basis = algebra.canonical_basis();
    let id = algebra.identity_element();
    let families = [first, second];
    let mut tensors = Vec::with_capacity(orders);
    for j in 0..orders {
        let count = d.pow(j as u32);
        let letters = j + 1;
        let mut tensor = Vec::with_capacity(count);
        for idx in 0..count {
            let tuple = decode_tuple(idx, j, d);
            let mut coeffs = Vec::with_capacity(letters + 1);
            coeffs.push(id.clone());
            for &t in &tuple {
                coeffs.push(basis[t].clone());
            }
            coeffs.push(id.clone());
            let mut acc = ComplexMatrix::zeros(algebra.k, algebra.k);
            for choice in 0..(1usize << letters) {
                let sources: Vec<usize> =
                    (0..letters).map(|t| (choice >> t) & 1).collect();
                let word = MixedWord {
                    coeffs: coeffs.clone(),
                    sources,
                };
                acc = acc.add(&mixed_moment(&families, &word)?)?;
            }
            tensor.push(acc);
        }
        tensors.push(tensor);
    }
    Ok(MomentFamily { algebra, tensors })
}

/// Truncated formal series `Σ_m f_m(b, …, b)` with base-valued multilinear
/// coefficients stored on basis tuples.
struct BSeries {
    algebra: BaseAlgebra,
    tensors: Vec<Vec<ComplexMatrix>>,
}

impl BSeries {
    fn zeros(algebra: BaseAlgebra, max_degree: usize) -> Self {
        let d = algebra.dim();
        let k = algebra.k;
        let tensors = (0..=max_degree)
            .map(|m| vec![ComplexMatrix::zeros(k, k); d.pow(m as u32)])
            .collect();
        BSeries { algebra, tensors }
    }

    fn one(algebra: BaseAlgebra, max_degree: usize) -> Self {
        let mut s = Self::zeros(algebra, max_degree);
        s.tensors[0][0] = algebra.identity_element();
        s
    }

    fn identity(algebra: BaseAlgebra, max_degree: usize) -> Self {
        let mut s = Self::zeros(algebra, max_degree);
        for (t, g) in algebra.canonical_basis().into_iter().enumerate() {
            s.tensors[1][t] = g;
        }
        s
    }

    fn max_degree(&self) -> usize {
        self.tensors.len() - 1
    }

    fn add(&self, other: &BSeries) -> Result<BSeries, FreeProbError> {
        let mut out = Self::zeros(self.algebra, self.max_degree().max(other.max_degree()));
        for (m, tensor) in out.tensors.iter_mut().enumerate() {
            for (idx, slot) in tensor.iter_mut().enumerate() {
                let mut v = ComplexMatrix::zeros(self.algebra.k, self.algebra.k);
                if let Some(t) = self.tensors.get(m) {
                    v = v.add(&t[idx])?;
                }
                if let Some(t) = other.tensors.get(m) {
                    v = v.add(&t[idx])?;
                }
                *slot = v;
            }
        }
        Ok(out)
    }

    fn scale(&self, z: Complex64) -> BSeries {
        BSeries {
            algebra: self.algebra,
            tensors: self
                .tensors
                .iter()
                .map(|t| t.iter().map(|x| x.scale(z)).collect())
                .collect(),
        }
    }

    /// Cauchy product: degree-`m` tensor sums pointwise products over the
    /// splits of the input tuple.
    fn mul(&self, other: &BSeries, max_degree: usize) -> Result<BSeries, FreeProbError> {
        let d = self.algebra.dim();
        let mut out = Self::zeros(self.algebra, max_degree);
        for m in 0..=max_degree {
            let count = d.pow(m as u32);
            for idx in 0..count {
                let tuple = decode_tuple(idx, m, d);
                let mut acc = ComplexMatrix::zeros(self.algebra.k, self.algebra.k);
                for split in 0..=m {
                    if split > self.max_degree() || m - split > other.max_degree() {
                        continue;
                    }
                    let left = self.entry(split, &tuple[..split]);
                    let right = other.entry(m - split, &tuple[split..]);
                    acc = acc.add(&left.multiply(right)?)?;
                }
                out.tensors[m][idx] = acc;
            }
        }
        Ok(out)
    }

    fn entry(&self, degree: usize, tuple: &[usize]) -> &ComplexMatrix {
        let d = self.algebra.dim();
        let idx = tuple.iter().fold(0usize, |acc, &j| acc * d + j);
        &self.tensors[degree][idx]
    }

    /// Multilinear value of the degree-`l` coefficient on arbitrary base
    /// elements given by coordinate vectors.
    fn coefficient_on(&self, l: usize, arg_coords: &[&[Complex64]]) -> ComplexMatrix {
        let d = self.algebra.dim();
        let mut acc = ComplexMatrix::zeros(self.algebra.k, self.algebra.k);
        for (idx, entry) in self.tensors[l].iter().enumerate() {
            let tuple = decode_tuple(idx, l, d);
            let mut w = cplx(1.0, 0.0);
            for (s, &t) in tuple.iter().enumerate() {
                w *= arg_coords[s][t];
                if w.norm() == 0.0 {
                    break;
                }
            }
            if w.norm() != 0.0 {
                acc = acc.add(&entry.scale(w)).expect("same shape");
            }
        }
        acc
    }

    /// `self ∘ inner`; the inner series must vanish at the origin.
    fn compose(&self, inner: &BSeries, max_degree: usize) -> Result<BSeries, FreeProbError> {
        if inner.tensors[0][0].max_abs() != 0.0 {
            return Err(FreeProbError::Shape(
                "composition needs an inner series without constant term".into(),
            ));
        }
        let d = self.algebra.dim();
        let mut out = Self::zeros(self.algebra, max_degree);
        out.tensors[0][0] = self.tensors[0][0].clone();
        for m in 1..=max_degree {
            let count = d.pow(m as u32);
            for idx in 0..count {
                let tuple = decode_tuple(idx, m, d);
                let mut acc = ComplexMatrix::zeros(self.algebra.k, self.algebra.k);
                for l in 1..=m.min(self.max_degree()) {
                    for comp in compositions(m, l, inner.max_degree()) {
                        acc = acc.add(&compose_term(self, inner, l, &comp, &tuple))?;
                    }
                }
                out.tensors[m][idx] = acc;
            }
        }
        Ok(out)
    }

    /// Compositional inverse, assuming the linear part is the identity.
    fn invert_composition(&self, max_degree: usize) -> Result<BSeries, FreeProbError> {
        let d = self.algebra.dim();
        let id_check = Self::identity(self.algebra, 1);
        for (idx, x) in self.tensors[1].iter().enumerate() {
            if x.max_abs_diff(&id_check.tensors[1][idx]) > 0.0 {
                return Err(FreeProbError::Shape(
                    "inversion needs an identity linear part".into(),
                ));
            }
        }
        let mut inv = Self::identity(self.algebra, max_degree);
        for m in 2..=max_degree {
            let count = d.pow(m as u32);
            for idx in 0..count {
                let tuple = decode_tuple(idx, m, d);
                let mut acc = ComplexMatrix::zeros(self.algebra.k, self.algebra.k);
                for l in 2..=m.min(self.max_degree()) {
                    for comp in compositions(m, l, m - 1) {
                        acc = acc.add(&compose_term(self, &inv, l, &comp, &tuple))?;
                    }
                }
                inv.tensors[m][idx] = acc.neg();
            }
        }
        Ok(inv)
    }

    /// `(1 + self)⁻¹` for a series without constant term.
    fn geometric_inverse(&self, max_degree: usize) -> Result<BSeries, FreeProbError> {
        let mut acc = Self::one(self.algebra, max_degree);
        let mut power = Self::one(self.algebra, max_degree);
        for j in 1..=max_degree {
            power = power.mul(self, max_degree)?;
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            acc = acc.add(&power.scale(cplx(sign, 0.0)))?;
        }
        Ok(acc)
    }
}

fn compositions(total: usize, parts: usize, cap: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    fn rec(remaining: usize, slots: usize, cap: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if slots == 0 {
            if remaining == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let hi = remaining.saturating_sub(slots - 1).min(cap);
        for part in 1..=hi {
            cur.push(part);
            rec(remaining - part, slots - 1, cap, cur, out);
            cur.pop();
        }
    }
    rec(total, parts, cap, &mut Vec::with_capacity(parts), &mut out);
    out
}

/// One chain-rule term: the degree-`l` coefficient of `outer` applied to the
/// inner values on the consecutive segments of `tuple` cut by `comp`.
fn compose_term(
    outer: &BSeries,
    inner: &BSeries,
    l: usize,
    comp: &[usize],
    tuple: &[usize],
) -> ComplexMatrix {
    let algebra = outer.algebra;
    let mut at = 0usize;
    let coords: Vec<Vec<Complex64>> = comp
        .iter()
        .map(|&part| {
            let value = inner.entry(part, &tuple[at..at + part]);
            at += part;
            algebra.coords(value)
        })
        .collect();
    let refs: Vec<&[Complex64]> = coords.iter().map(Vec::as_slice).collect();
    outer.coefficient_on(l, &refs)
}

/// Coefficient family of the unsymmetrized R-transform built from moment
/// tensors alone: invert the Cauchy series compositionally, feed it to the
/// moment generating series, and resolve the defining fraction.
///
/// Needs moments with up to `max_degree + 1` letters.
pub fn r_transform_series(
    moments: &MomentFamily,
    max_degree: usize,
) -> Result<CoefficientFamily, FreeProbError> {
    if moments.max_order() < max_degree + 1 {
        return Err(FreeProbError::Shape(format!(
            "need moments with up to {} letters, have {}",
            max_degree + 1,
            moments.max_order()
        )));
    }
    let algebra = moments.algebra;
    let d = algebra.dim();
    let basis = algebra.canonical_basis();

    // G(b) = b + Σ b·M_{m-2}(b,…,b)·b
    let mut g = BSeries::identity(algebra, max_degree);
    for m in 2..=max_degree {
        let count = d.pow(m as u32);
        for idx in 0..count {
            let tuple = decode_tuple(idx, m, d);
            let middle = moments.tensor_entry(m - 2, &tuple[1..m - 1]);
            g.tensors[m][idx] = basis[tuple[0]]
                .multiply(middle)?
                .multiply(&basis[tuple[m - 1]])?;
        }
    }

    // Φ(H_a(b)) as a series: the moment tensors themselves.
    let mut h = BSeries::zeros(algebra, max_degree);
    for m in 0..=max_degree {
        let count = d.pow(m as u32);
        for idx in 0..count {
            let tuple = decode_tuple(idx, m, d);
            h.tensors[m][idx] = moments.tensor_entry(m, &tuple).clone();
        }
    }

    let l = g.invert_composition(max_degree)?;
    let k = h.compose(&l, max_degree)?;
    let kl = k.mul(&l, max_degree)?;
    let r = kl.geometric_inverse(max_degree)?.mul(&k, max_degree)?;

    let mut fam = CoefficientFamily::zeros(algebra, algebra.dim(), max_degree);
    for m in 0..=max_degree {
        let count = d.pow(m as u32);
        for idx in 0..count {
            let tuple = decode_tuple(idx, m, d);
            for (o, coord) in algebra.coords(&r.tensors[m][idx]).into_iter().enumerate() {
                fam.set(m, o, &tuple, coord);
            }
        }
    }
    Ok(fam)
}
