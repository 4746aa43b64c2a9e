use base_algebra::{BaseAlgebra, MatOverB};
use linalg_core::{derive_rng, Complex64};
use serde::Serialize;
use std::collections::BTreeMap;

use crate::error::NcError;
use crate::poly::NCPoly;

/// Permutation-count ceiling for antisymmetrization (p! terms).
pub const MAX_ANTISYM: usize = 6;

/// Total antisymmetrization `Σ_σ sign(σ) · m_{σ(1)} ⋯ m_{σ(p)}` of `p`
/// pairwise distinct monomial words of one common degree.
///
/// Evaluated at matricial level `k`, the result vanishes whenever `k² < p`:
/// the evaluations live in a space of dimension `k²`, so any `p > k²` of
/// them are linearly dependent and the alternating sum collapses. The word
/// degree can exceed the multiplication cap — words are concatenated
/// directly here, bounded instead by [`MAX_ANTISYM`].
pub fn antisymmetrize(algebra: BaseAlgebra, words: &[Vec<usize>]) -> Result<NCPoly, NcError> {
    let p = words.len();
    if p > MAX_ANTISYM {
        return Err(NcError::TooManyMonomials(p, MAX_ANTISYM));
    }
    let degree = words.first().map_or(0, Vec::len);
    if words.iter().any(|w| w.len() != degree) {
        return Err(NcError::MixedDegrees);
    }
    for (i, w) in words.iter().enumerate() {
        if let Some(&bad) = w.iter().find(|&&j| j >= algebra.dim()) {
            return Err(NcError::LetterOutOfRange(bad, algebra.dim()));
        }
        if words[..i].contains(w) {
            return Err(NcError::DuplicateWord);
        }
    }
    let mut terms: BTreeMap<Vec<usize>, Complex64> = BTreeMap::new();
    let mut order: Vec<usize> = (0..p).collect();
    permute_with_sign(&mut order, 0, 1.0, &mut |perm, sign| {
        let mut w = Vec::with_capacity(p * degree);
        for &i in perm {
            w.extend_from_slice(&words[i]);
        }
        let slot = terms.entry(w).or_insert(Complex64::new(0.0, 0.0));
        *slot += Complex64::new(sign, 0.0);
    });
    Ok(NCPoly::from_terms(algebra, terms))
}

/// Enumerate permutations of `order[at..]` in place, tracking the sign, and
/// call `visit` on each completed arrangement.
fn permute_with_sign(
    order: &mut Vec<usize>,
    at: usize,
    sign: f64,
    visit: &mut impl FnMut(&[usize], f64),
) {
    if at + 1 >= order.len() {
        visit(order, sign);
        return;
    }
    permute_with_sign(order, at + 1, sign, visit);
    for i in at + 1..order.len() {
        order.swap(at, i);
        permute_with_sign(order, at + 1, -sign, visit);
        order.swap(at, i);
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PathologicalStage {
    /// The scaled antisymmetrized polynomial `λ_j · g_j`.
    pub scaled: NCPoly,
    /// Number of antisymmetrized monomials `p_j = N_j² + 1`.
    pub monomials: usize,
    /// Common degree of the monomials.
    pub monomial_degree: usize,
    /// Highest level at which the stage vanishes identically (`k² < p_j`).
    pub vanishing_level: usize,
    /// Level at which nonvanishing of the partial sum is witnessed.
    pub witness_level: usize,
    pub lambda: f64,
    /// Largest partial-sum norm seen among sampled points of radius `< 1/j`.
    pub witness_norm: f64,
    /// The sampled radius used (slightly inside `1/j`).
    pub sample_radius: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PathologicalRun {
    pub stages: Vec<PathologicalStage>,
    /// Partial sums `λ₁g₁ + … + λ_jg_j` for `j = 1..=depth`.
    pub partial_sums: Vec<NCPoly>,
}

/// Build the diverging sequence of partial sums: stage `j` antisymmetrizes
/// `p_j = N_j² + 1` distinct monomials so that it vanishes identically up to
/// level `N_j`, then scales it until the partial sum exceeds `j` somewhere
/// in the ball of radius `1/j` at the next level `N_{j+1}`.
///
/// Every later stage vanishes at the earlier witness levels, so scaling a
/// new stage never disturbs the witnesses already found — which is what
/// makes the sum diverge while staying well-defined degreewise.
pub fn build_pathological(
    algebra: BaseAlgebra,
    depth: usize,
    seed: u64,
) -> Result<PathologicalRun, NcError> {
    assert!(algebra.dim() > 1, "needs a base algebra of dimension > 1");
    let d = algebra.dim();
    let mut stages: Vec<PathologicalStage> = Vec::new();
    let mut partial_sums: Vec<NCPoly> = Vec::new();
    let mut partial = NCPoly::zero(algebra);
    let mut level = 1usize; // N_j

    for j in 1..=depth {
        let p = level * level + 1;
        if p > MAX_ANTISYM {
            return Err(NcError::TooManyMonomials(p, MAX_ANTISYM));
        }
        // Smallest degree giving at least p distinct words.
        let mut deg = 1usize;
        while d.pow(deg as u32) < p {
            deg += 1;
        }
        let words: Vec<Vec<usize>> = (0..p).map(|i| index_word(i, deg, d)).collect();
        let g = antisymmetrize(algebra, &words)?;

        // Find the first level where g is not identically zero.
        let witness_level = (level + 1..level + 4)
            .find(|&n| {
                let mut rng = derive_rng(seed, &[j as u64, n as u64, 0]);
                (0..8).any(|_| {
                    let beta = MatOverB::random(algebra, n, &mut rng, 1.0);
                    g.evaluate(&beta).map(|m| m.max_abs() > 1e-6).unwrap_or(false)
                })
            })
            .ok_or_else(|| {
                NcError::SearchFailed(format!("no nonvanishing level found for stage {j}"))
            })?;

        // Sample points of norm just inside 1/j at the witness level.
        let radius = 0.9 / j as f64;
        let mut rng = derive_rng(seed, &[j as u64, witness_level as u64, 1]);
        let samples: Vec<MatOverB> = (0..48)
            .map(|_| {
                let raw = MatOverB::random(algebra, witness_level, &mut rng, 1.0);
                let nrm = raw.norm();
                raw.scale(Complex64::new(radius / nrm.max(1e-12), 0.0))
            })
            .collect();

        let prev_vals: Vec<_> = samples
            .iter()
            .map(|b| partial.evaluate(b).expect("levels agree"))
            .collect();
        let g_vals: Vec<_> = samples
            .iter()
            .map(|b| g.evaluate(b).expect("levels agree"))
            .collect();

        // Double λ until the partial sum exceeds j at some sample.
        let mut lambda = 1.0f64;
        let mut witness_norm = 0.0f64;
        let mut found = false;
        for _ in 0..200 {
            witness_norm = prev_vals
                .iter()
                .zip(g_vals.iter())
                .map(|(a, b)| {
                    a.add(&b.scale(Complex64::new(lambda, 0.0)))
                        .unwrap()
                        .spectral_norm()
                })
                .fold(0.0, f64::max);
            if witness_norm > j as f64 {
                found = true;
                break;
            }
            lambda *= 2.0;
        }
        if !found {
            return Err(NcError::SearchFailed(format!(
                "no scaling makes stage {j} exceed {j} at radius {radius}"
            )));
        }

        let scaled = g.scale(Complex64::new(lambda, 0.0));
        partial = partial.add(&scaled)?;
        stages.push(PathologicalStage {
            scaled,
            monomials: p,
            monomial_degree: deg,
            vanishing_level: level,
            witness_level,
            lambda,
            witness_norm,
            sample_radius: radius,
        });
        partial_sums.push(partial.clone());
        level = witness_level;
    }

    Ok(PathologicalRun {
        stages,
        partial_sums,
    })
}

/// The `i`-th word of the given length over a `d`-letter alphabet,
/// most-significant letter first.
fn index_word(mut i: usize, len: usize, d: usize) -> Vec<usize> {
    let mut w = vec![0usize; len];
    for slot in w.iter_mut().rev() {
        *slot = i % d;
        i /= d;
    }
    w
}
