use base_algebra::{dual_basis, trace_state, AlgebraKind, BaseAlgebra};
use linalg_core::{cplx, haar_unitary, Complex64, ComplexMatrix, Rng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::McConfig;
use crate::error::FreeProbError;

/// Value of `φ(a₁U…a_mUcU⁻¹b_n…U⁻¹b₁)` in the trace-state free product of
/// the base algebra with one Haar unitary: `0` when the `U` and `U⁻¹` counts
/// differ, otherwise `φ(a₁b₁)…φ(a_mb_m)·φ(c)`.
pub fn free_moment_oracle(
    algebra: BaseAlgebra,
    a_words: &[ComplexMatrix],
    c: &ComplexMatrix,
    b_words: &[ComplexMatrix],
) -> Result<Complex64, FreeProbError> {
    let phi = trace_state(algebra);
    for x in a_words.iter().chain(b_words.iter()) {
        algebra.check_element(x)?;
    }
    algebra.check_element(c)?;
    if a_words.len() != b_words.len() {
        return Ok(cplx(0.0, 0.0));
    }
    let mut acc = phi.apply(c);
    for (a, b) in a_words.iter().zip(b_words.iter()) {
        acc *= phi.apply(&a.multiply(b)?);
    }
    Ok(acc)
}

/// One draw from the stably matricial unitary group at level `N`: a single
/// Haar unitary of size `Nk` for the full matrix algebra, `k` independent
/// Haar unitaries of size `N` for the diagonal one.
pub enum HaarSample {
    Full(ComplexMatrix),
    Diag(Vec<ComplexMatrix>),
}

pub fn sample_unitary(algebra: BaseAlgebra, n: usize, rng: &mut Rng) -> HaarSample {
    match algebra.kind {
        AlgebraKind::FullMatrix => HaarSample::Full(haar_unitary(n * algebra.k, rng)),
        AlgebraKind::Diagonal => {
            HaarSample::Diag((0..algebra.k).map(|_| haar_unitary(n, rng)).collect())
        }
    }
}

/// `z(φ_j)` at the sampled point: the `N × N` matrix of functional values of
/// the `k × k` blocks, which for the diagonal algebra is just the `j`-th
/// coordinate unitary.
fn generator_value(algebra: BaseAlgebra, sample: &HaarSample, j: usize, n: usize) -> ComplexMatrix {
    let duals = dual_basis(algebra);
    match sample {
        HaarSample::Full(omega) => {
            let k = algebra.k;
            ComplexMatrix::from_fn(n, n, |r, c| duals[j].apply(&omega.block(r * k, c * k, k, k)))
        }
        HaarSample::Diag(omegas) => {
            let a = duals[j].dual_matrix();
            let mut acc = ComplexMatrix::zeros(n, n);
            for (idx, om) in omegas.iter().enumerate() {
                let w = a.get(idx, idx);
                if w.norm() != 0.0 {
                    acc = acc.add(&om.scale(w)).expect("same shape");
                }
            }
            acc
        }
    }
}

/// Values of every generator word of length `1..=max_len`, ordered by length
/// then lexicographically; each entry extends a previously computed prefix.
pub(crate) fn all_word_values(
    algebra: BaseAlgebra,
    sample: &HaarSample,
    n: usize,
    max_len: usize,
) -> Vec<ComplexMatrix> {
    let d = algebra.dim();
    let generators: Vec<ComplexMatrix> = (0..d)
        .map(|j| generator_value(algebra, sample, j, n))
        .collect();
    let mut values: Vec<ComplexMatrix> = Vec::new();
    let mut prev_offset = 0usize;
    for len in 1..=max_len {
        let start = values.len();
        if len == 1 {
            values.extend(generators.iter().cloned());
        } else {
            for p in prev_offset..start {
                for g in &generators {
                    let v = values[p].multiply(g).expect("square same-size factors");
                    values.push(v);
                }
            }
        }
        prev_offset = start;
    }
    values
}

/// Position of a word in the [`all_word_values`] ordering.
pub(crate) fn word_index(d: usize, word: &[usize]) -> usize {
    let mut offset = 0usize;
    for len in 1..word.len() {
        offset += d.pow(len as u32);
    }
    offset + word.iter().fold(0usize, |acc, &j| acc * d + j)
}

/// `N⁻¹ Tr(P Q*)` without forming the product.
pub(crate) fn normalized_pairing(p: &ComplexMatrix, q: &ComplexMatrix, n: usize) -> Complex64 {
    let mut acc = cplx(0.0, 0.0);
    for i in 0..p.rows() {
        for j in 0..p.cols() {
            acc += p.get(i, j) * q.get(i, j).conj();
        }
    }
    acc / cplx(n as f64, 0.0)
}

/// Large-`N` limit of `N⁻¹Tr(z-word(ω)·(z-word(ω))*)` for generator words.
///
/// Over the full matrix algebra the value is assembled from the free-product
/// oracle following the matrix-unit reduction; over the diagonal algebra the
/// coordinates are independent Haar unitaries and the limit is the product
/// of coordinatewise overlaps of the dual matrices.
pub fn exact_haar_limit(algebra: BaseAlgebra, alpha: &[usize], beta: &[usize]) -> Complex64 {
    let one = cplx(1.0, 0.0);
    if alpha.len() != beta.len() {
        return cplx(0.0, 0.0);
    }
    if alpha.is_empty() {
        return one;
    }
    let k = algebra.k;
    match algebra.kind {
        AlgebraKind::FullMatrix => {
            let m = alpha.len();
            let pq: Vec<(usize, usize)> = alpha.iter().map(|&j| (j / k, j % k)).collect();
            let rs: Vec<(usize, usize)> = beta.iter().map(|&j| (j / k, j % k)).collect();
            let unit = |i: usize, j: usize| ComplexMatrix::matrix_unit(k, i, j);
            let mut a_list = vec![ComplexMatrix::identity(k)];
            for t in 1..m {
                a_list.push(unit(pq[t - 1].1, pq[t].0));
            }
            let c = unit(pq[m - 1].1, rs[m - 1].1);
            let mut b_list = vec![unit(rs[0].0, pq[0].0)];
            for t in 1..m {
                b_list.push(unit(rs[t].0, rs[t - 1].1));
            }
            let phi = free_moment_oracle(algebra, &a_list, &c, &b_list)
                .expect("matrix units are valid elements");
            phi * cplx(k as f64, 0.0)
        }
        AlgebraKind::Diagonal => {
            let duals = dual_basis(algebra);
            let mut acc = one;
            for (&ai, &bi) in alpha.iter().zip(beta.iter()) {
                let a = duals[ai].dual_matrix();
                let b = duals[bi].dual_matrix();
                let mut dot = cplx(0.0, 0.0);
                for j in 0..k {
                    dot += a.get(j, j) * b.get(j, j).conj();
                }
                acc *= dot;
            }
            acc
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct McRow {
    pub n: usize,
    pub samples: usize,
    pub estimate_re: f64,
    pub estimate_im: f64,
    pub stderr: f64,
    pub exact_limit_re: f64,
    pub exact_limit_im: f64,
}

impl McRow {
    pub fn estimate(&self) -> Complex64 {
        cplx(self.estimate_re, self.estimate_im)
    }

    pub fn exact_limit(&self) -> Complex64 {
        cplx(self.exact_limit_re, self.exact_limit_im)
    }

    pub fn error(&self) -> f64 {
        (self.estimate() - self.exact_limit()).norm()
    }
}

/// Per-`N` Monte Carlo summary for one pair of generator words.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct McReport {
    pub alpha: Vec<usize>,
    pub beta: Vec<usize>,
    pub rows: Vec<McRow>,
}

pub const MC_CSV_HEADER: &str =
    "N,samples,estimate_re,estimate_im,stderr,exact_limit_re,exact_limit_im";

impl McReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(MC_CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{:.15e},{:.15e},{:.15e},{:.15e},{:.15e}\n",
                r.n, r.samples, r.estimate_re, r.estimate_im, r.stderr, r.exact_limit_re,
                r.exact_limit_im
            ));
        }
        out
    }

    pub fn final_row(&self) -> &McRow {
        self.rows.last().expect("ladder is nonempty")
    }
}

fn summarize(values: &[Complex64]) -> (Complex64, f64) {
    let s = values.len() as f64;
    let mean = values.iter().sum::<Complex64>() / cplx(s, 0.0);
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).norm_sqr()).sum::<f64>() / (s - 1.0);
    (mean, (var / s).sqrt())
}

fn check_word(algebra: BaseAlgebra, word: &[usize]) -> Result<(), FreeProbError> {
    let d = algebra.dim();
    if let Some(&bad) = word.iter().find(|&&j| j >= d) {
        return Err(FreeProbError::Shape(format!(
            "word letter {bad} out of range for dimension {d}"
        )));
    }
    Ok(())
}

/// Monte Carlo estimates of `N⁻¹Tr(z-word(ω)·(z-word(ω))*)` along the
/// `N`-ladder, with the exact limit attached for comparison.
pub fn haar_moment_estimate(
    config: &McConfig,
    alpha: &[usize],
    beta: &[usize],
) -> Result<McReport, FreeProbError> {
    check_word(config.algebra, alpha)?;
    check_word(config.algebra, beta)?;
    let max_len = alpha.len().max(beta.len()).max(1);
    let exact = exact_haar_limit(config.algebra, alpha, beta);
    let d = config.algebra.dim();
    let mut rows = Vec::with_capacity(config.n_ladder.len());
    for &n in &config.n_ladder {
        let values: Vec<Complex64> = (0..config.samples)
            .into_par_iter()
            .map(|s| {
                let mut rng = config.stream(n, s);
                let sample = sample_unitary(config.algebra, n, &mut rng);
                let words = all_word_values(config.algebra, &sample, n, max_len);
                let id = ComplexMatrix::identity(n);
                let p = if alpha.is_empty() {
                    &id
                } else {
                    &words[word_index(d, alpha)]
                };
                let q = if beta.is_empty() {
                    &id
                } else {
                    &words[word_index(d, beta)]
                };
                normalized_pairing(p, q, n)
            })
            .collect();
        let (mean, stderr) = summarize(&values);
        rows.push(McRow {
            n,
            samples: config.samples,
            estimate_re: mean.re,
            estimate_im: mean.im,
            stderr,
            exact_limit_re: exact.re,
            exact_limit_im: exact.im,
        });
    }
    Ok(McReport {
        alpha: alpha.to_vec(),
        beta: beta.to_vec(),
        rows,
    })
}

/// All word pairs of length `1..=max_len` at once, sharing the Haar samples
/// across pairs; one report per pair in (length, lex) × (length, lex) order.
pub fn haar_orthogonality_sweep(
    config: &McConfig,
    max_len: usize,
) -> Result<Vec<McReport>, FreeProbError> {
    if max_len == 0 {
        return Err(FreeProbError::BadConfig("need words of length ≥ 1".into()));
    }
    let d = config.algebra.dim();
    let mut words: Vec<Vec<usize>> = Vec::new();
    for len in 1..=max_len {
        let count = d.pow(len as u32);
        for t in 0..count {
            let mut w = vec![0usize; len];
            let mut idx = t;
            for slot in w.iter_mut().rev() {
                *slot = idx % d;
                idx /= d;
            }
            words.push(w);
        }
    }
    let pair_count = words.len() * words.len();

    // per-N, per-pair sample values
    let mut per_pair: Vec<Vec<McRow>> = vec![Vec::new(); pair_count];
    for &n in &config.n_ladder {
        let sample_values: Vec<Vec<Complex64>> = (0..config.samples)
            .into_par_iter()
            .map(|s| {
                let mut rng = config.stream(n, s);
                let sample = sample_unitary(config.algebra, n, &mut rng);
                let values = all_word_values(config.algebra, &sample, n, max_len);
                let mut out = Vec::with_capacity(pair_count);
                for p in &values {
                    for q in &values {
                        out.push(normalized_pairing(p, q, n));
                    }
                }
                out
            })
            .collect();
        for (pair, rows) in per_pair.iter_mut().enumerate() {
            let values: Vec<Complex64> = sample_values.iter().map(|v| v[pair]).collect();
            let (mean, stderr) = summarize(&values);
            rows.push(McRow {
                n,
                samples: config.samples,
                estimate_re: mean.re,
                estimate_im: mean.im,
                stderr,
                exact_limit_re: 0.0,
                exact_limit_im: 0.0,
            });
        }
    }

    let mut reports = Vec::with_capacity(pair_count);
    for (i, alpha) in words.iter().enumerate() {
        for (j, beta) in words.iter().enumerate() {
            let exact = exact_haar_limit(config.algebra, alpha, beta);
            let mut rows = per_pair[i * words.len() + j].clone();
            for r in &mut rows {
                r.exact_limit_re = exact.re;
                r.exact_limit_im = exact.im;
            }
            reports.push(McReport {
                alpha: alpha.clone(),
                beta: beta.clone(),
                rows,
            });
        }
    }
    Ok(reports)
}
