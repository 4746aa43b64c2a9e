use base_algebra::{BaseAlgebra, MatOverB};
use linalg_core::{cplx, Complex64, ComplexMatrix};
use ncpoly::NCPoly;
use serde::{Deserialize, Serialize};

use crate::error::CalcError;
use crate::function::MatricialFn;

/// Taylor coefficients of a matricial function at the origin: one dense
/// multilinear tensor per degree, indexed by tuples over the canonical basis
/// of the input algebra. `out_dim` is 1 for scalar-valued families and
/// `dim B` for algebra-valued ones (coordinates in the canonical basis).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoefficientFamily {
    pub in_algebra: BaseAlgebra,
    pub out_dim: usize,
    /// `tensors[m]` has `out_dim · dim^m` entries, output index major.
    pub tensors: Vec<Vec<Complex64>>,
}

impl CoefficientFamily {
    pub fn zeros(in_algebra: BaseAlgebra, out_dim: usize, max_degree: usize) -> Self {
        let d = in_algebra.dim();
        let tensors = (0..=max_degree)
            .map(|m| vec![Complex64::new(0.0, 0.0); out_dim * d.pow(m as u32)])
            .collect();
        CoefficientFamily {
            in_algebra,
            out_dim,
            tensors,
        }
    }

    pub fn max_degree(&self) -> usize {
        self.tensors.len().saturating_sub(1)
    }

    pub fn is_scalar_valued(&self) -> bool {
        self.out_dim == 1
    }

    /// Row-major index of a basis tuple.
    pub fn tuple_index(&self, tuple: &[usize]) -> usize {
        let d = self.in_algebra.dim();
        tuple.iter().fold(0usize, |acc, &j| acc * d + j)
    }

    pub fn get(&self, degree: usize, out: usize, tuple: &[usize]) -> Complex64 {
        debug_assert_eq!(tuple.len(), degree);
        let d = self.in_algebra.dim();
        self.tensors[degree][out * d.pow(degree as u32) + self.tuple_index(tuple)]
    }

    pub fn set(&mut self, degree: usize, out: usize, tuple: &[usize], v: Complex64) {
        debug_assert_eq!(tuple.len(), degree);
        let d = self.in_algebra.dim();
        let idx = out * d.pow(degree as u32) + self.tuple_index(tuple);
        self.tensors[degree][idx] = v;
    }

    pub fn max_abs_diff(&self, other: &CoefficientFamily) -> f64 {
        let mut worst = 0.0f64;
        let hi = self.tensors.len().max(other.tensors.len());
        for m in 0..hi {
            let empty = Vec::new();
            let a = self.tensors.get(m).unwrap_or(&empty);
            let b = other.tensors.get(m).unwrap_or(&empty);
            for i in 0..a.len().max(b.len()) {
                let x = a.get(i).copied().unwrap_or(Complex64::new(0.0, 0.0));
                let y = b.get(i).copied().unwrap_or(Complex64::new(0.0, 0.0));
                worst = worst.max((x - y).norm());
            }
        }
        worst
    }

    /// Value at `β ∈ M_n(B)` for an algebra-valued family: the sum of the
    /// per-coordinate polynomial values tensored with the canonical basis of
    /// the target algebra, whose dimension must match `out_dim`.
    pub fn evaluate_b(&self, target: BaseAlgebra, beta: &MatOverB) -> Result<MatOverB, CalcError> {
        if self.out_dim != target.dim() {
            return Err(CalcError::FamilyShape(format!(
                "family has {} output coordinates but the target algebra has dimension {}",
                self.out_dim,
                target.dim()
            )));
        }
        let basis = target.canonical_basis();
        let mut acc = MatOverB::zeros(target, beta.level());
        for (o, b) in basis.iter().enumerate() {
            let p = self.component_poly(o)?;
            let v = p.evaluate(beta)?;
            acc = acc.add(&MatOverB::from_kron(target, &v, b)?)?;
        }
        Ok(acc)
    }

    /// The polynomial carrying output coordinate `o`.
    pub fn component_poly(&self, o: usize) -> Result<NCPoly, CalcError> {
        let d = self.in_algebra.dim();
        let mut p = NCPoly::zero(self.in_algebra);
        for (m, tensor) in self.tensors.iter().enumerate() {
            let count = d.pow(m as u32);
            for t in 0..count {
                let c = tensor[o * count + t];
                if c.norm() == 0.0 {
                    continue;
                }
                p = p.add(&NCPoly::monomial(self.in_algebra, decode_tuple(t, m, d), c)?)?;
            }
        }
        Ok(p)
    }
}

fn decode_tuple(mut idx: usize, len: usize, d: usize) -> Vec<usize> {
    let mut w = vec![0usize; len];
    for slot in w.iter_mut().rev() {
        *slot = idx % d;
        idx /= d;
    }
    w
}

/// Scalar-valued family of an NCPoly: the degree-`m` tensor is exactly the
/// polynomial's degree-`m` term map.
pub fn family_from_poly(p: &NCPoly) -> CoefficientFamily {
    let max_degree = p.degree().unwrap_or(0);
    let mut fam = CoefficientFamily::zeros(p.algebra(), 1, max_degree);
    for (word, c) in p.terms() {
        fam.set(word.len(), 0, word, *c);
    }
    fam
}

/// Inverse of [`family_from_poly`] for scalar-valued families.
pub fn family_to_poly(fam: &CoefficientFamily) -> Result<NCPoly, CalcError> {
    if !fam.is_scalar_valued() {
        return Err(CalcError::FamilyShape(
            "only scalar-valued families convert to a single polynomial".into(),
        ));
    }
    fam.component_poly(0)
}

/// Algebra-valued family with one polynomial per output coordinate; the
/// coordinates refer to the canonical basis of whatever algebra the family
/// is later evaluated into.
pub fn family_from_poly_vec(polys: &[NCPoly]) -> Result<CoefficientFamily, CalcError> {
    let alg = polys
        .first()
        .map(NCPoly::algebra)
        .ok_or_else(|| CalcError::FamilyShape("empty polynomial vector".into()))?;
    let max_degree = polys.iter().filter_map(NCPoly::degree).max().unwrap_or(0);
    let mut fam = CoefficientFamily::zeros(alg, polys.len(), max_degree);
    for (o, p) in polys.iter().enumerate() {
        if p.algebra() != alg {
            return Err(CalcError::FamilyShape(
                "coordinate polynomials over different algebras".into(),
            ));
        }
        for (word, c) in p.terms() {
            fam.set(word.len(), o, word, *c);
        }
    }
    Ok(fam)
}

/// Evaluate a scalar-valued family at `β` by converting to its polynomial.
pub fn evaluate_family(fam: &CoefficientFamily, beta: &MatOverB) -> Result<ComplexMatrix, CalcError> {
    Ok(family_to_poly(fam)?.evaluate(beta)?)
}

impl MatricialFn {
    /// Recover the Taylor family at the origin up to `max_degree`.
    ///
    /// For each basis tuple `(b₁,…,b_m)` the ladder point
    /// `β = Σ e_{i,i+1} ⊗ b_i` at level `m+1` is nilpotent of order `m+1`,
    /// so the `(1, m+1)` entry of `f(zβ)` is `z^m · α_m(b₁ ⊗ … ⊗ b_m)` on
    /// the nose. Values at `m+1` scaled roots of unity and one discrete
    /// Fourier inversion recover the coefficient; the probe radius stays at
    /// half the declared domain radius.
    pub fn extract_coefficients(&self, max_degree: usize) -> Result<CoefficientFamily, CalcError> {
        let alg = self.algebra();
        let d = alg.dim();
        let basis = alg.canonical_basis();
        let basis_norms: Vec<f64> = basis.iter().map(ComplexMatrix::spectral_norm).collect();
        let mut fam = CoefficientFamily::zeros(alg, 1, max_degree);

        let origin = MatOverB::zeros(alg, 1);
        let a0 = self.evaluate(&origin)?.get(0, 0);
        fam.set(0, 0, &[], a0);

        for m in 1..=max_degree {
            let count = d.pow(m as u32);
            for t in 0..count {
                let tuple = decode_tuple(t, m, d);
                let max_norm = tuple
                    .iter()
                    .map(|&j| basis_norms[j])
                    .fold(0.0f64, f64::max)
                    .max(1e-12);
                let r = if self.radius().is_finite() {
                    0.5 * self.radius() / (m as f64 * max_norm)
                } else {
                    1.0
                };

                let mut ladder = MatOverB::zeros(alg, m + 1);
                for (i, &j) in tuple.iter().enumerate() {
                    ladder.set_entry(i, i + 1, &basis[j])?;
                }

                // p(z) = f(zβ)[0, m] has degree ≤ m; read its top coefficient.
                let nodes = m + 1;
                let mut acc = Complex64::new(0.0, 0.0);
                for s in 0..nodes {
                    let theta = 2.0 * std::f64::consts::PI * s as f64 / nodes as f64;
                    let omega = Complex64::new(theta.cos(), theta.sin());
                    let z = omega * r;
                    let val = self.evaluate(&ladder.scale(z))?;
                    let twist = Complex64::new(
                        (-(m as f64) * theta).cos(),
                        (-(m as f64) * theta).sin(),
                    );
                    acc += val.get(0, m) * twist;
                }
                let coeff = acc / cplx(nodes as f64, 0.0) / cplx(r.powi(m as i32), 0.0);
                fam.set(m, 0, &tuple, coeff);
            }
        }
        Ok(fam)
    }
}

/// Chain-rule composition of coefficient families: the degree-`k` tensor of
/// `outer ∘ inner` sums `outer_l ∘ (inner_{i₁} ⊗ … ⊗ inner_{i_l})` over all
/// compositions `i₁ + … + i_l = k`. The inner family must vanish at the
/// origin and produce coordinates for the outer family's input algebra.
/// Degrees beyond the shorter of the two caps are dropped.
pub fn compose_families(
    outer: &CoefficientFamily,
    inner: &CoefficientFamily,
) -> Result<CoefficientFamily, CalcError> {
    let mid_dim = outer.in_algebra.dim();
    if inner.out_dim != mid_dim {
        return Err(CalcError::FamilyShape(format!(
            "inner family outputs {} coordinates but the outer algebra has dimension {}",
            inner.out_dim, mid_dim
        )));
    }
    if inner.tensors[0].iter().any(|c| c.norm() != 0.0) {
        return Err(CalcError::InnerConstantTerm);
    }
    let k_max = outer.max_degree().min(inner.max_degree());
    let d_in = inner.in_algebra.dim();
    let mut out = CoefficientFamily::zeros(inner.in_algebra, outer.out_dim, k_max);

    // Constant term: inner sends 0 to 0, so only outer's constant survives.
    for o in 0..outer.out_dim {
        let v = outer.tensors[0][o];
        out.tensors[0][o] = v;
    }

    for k in 1..=k_max {
        let count = d_in.pow(k as u32);
        for o in 0..outer.out_dim {
            for t_idx in 0..count {
                let tuple = decode_tuple(t_idx, k, d_in);
                let mut acc = Complex64::new(0.0, 0.0);
                let l_hi = k.min(outer.max_degree());
                for l in 1..=l_hi {
                    for comp in compositions(k, l, inner.max_degree()) {
                        acc += contract(outer, inner, o, l, &comp, &tuple);
                    }
                }
                out.tensors[k][o * count + t_idx] = acc;
            }
        }
    }
    Ok(out)
}

/// All ways to write `k` as an ordered sum of `l` parts, each between 1 and
/// `part_cap`.
fn compositions(k: usize, l: usize, part_cap: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(l);
    fn rec(
        remaining: usize,
        slots: usize,
        cap: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if slots == 0 {
            if remaining == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let lo = 1usize;
        let hi = remaining.saturating_sub(slots - 1).min(cap);
        for part in lo..=hi {
            cur.push(part);
            rec(remaining - part, slots - 1, cap, cur, out);
            cur.pop();
        }
    }
    rec(k, l, part_cap, &mut cur, &mut out);
    out
}

/// `Σ_t outer_l[o, t] Π_s inner_{i_s}[t_s, segment_s]` for one composition.
fn contract(
    outer: &CoefficientFamily,
    inner: &CoefficientFamily,
    o: usize,
    l: usize,
    comp: &[usize],
    tuple: &[usize],
) -> Complex64 {
    let mid_dim = outer.in_algebra.dim();
    // Split the input tuple into the segments consumed by each inner factor.
    let mut segments = Vec::with_capacity(l);
    let mut at = 0usize;
    for &part in comp {
        segments.push(&tuple[at..at + part]);
        at += part;
    }
    // Precompute inner values per (slot, middle index).
    let inner_vals: Vec<Vec<Complex64>> = segments
        .iter()
        .zip(comp.iter())
        .map(|(seg, &part)| {
            (0..mid_dim)
                .map(|mid| inner.get(part, mid, seg))
                .collect()
        })
        .collect();
    let mut acc = Complex64::new(0.0, 0.0);
    let count = mid_dim.pow(l as u32);
    for t in 0..count {
        let mids = decode_tuple(t, l, mid_dim);
        let w = outer.get(l, o, &mids);
        if w.norm() == 0.0 {
            continue;
        }
        let mut prod = w;
        for (s, &mid) in mids.iter().enumerate() {
            prod *= inner_vals[s][mid];
            if prod.norm() == 0.0 {
                break;
            }
        }
        acc += prod;
    }
    acc
}
