use base_algebra::{AlgebraKind, BaseAlgebra, MatOverB};
use linalg_core::{cplx, Complex64, ComplexMatrix};
use matricial_calculus::{family_from_poly, CoefficientFamily, MatricialFn};
use ncpoly::NCPoly;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::McConfig;
use crate::error::FreeProbError;
use crate::haar::{all_word_values, normalized_pairing, sample_unitary, word_index, HaarSample};

/// Shrink factor applied to sampled points when the target is a genuine
/// series rather than a polynomial, so evaluation stays inside the domain;
/// the recovered coefficients are rescaled to compensate.
const SURROGATE_MARGIN: f64 = 1e-3;

/// What to run the recovery against: a polynomial in the coordinate
/// variables, or a matricial function evaluated on a slightly shrunk ball.
pub enum RecoveryTarget<'a> {
    Polynomial(&'a NCPoly),
    Function(&'a MatricialFn),
}

impl RecoveryTarget<'_> {
    fn algebra(&self) -> BaseAlgebra {
        match self {
            RecoveryTarget::Polynomial(p) => p.algebra(),
            RecoveryTarget::Function(f) => f.algebra(),
        }
    }

    fn surrogate_scale(&self) -> f64 {
        match self {
            RecoveryTarget::Polynomial(_) => 1.0,
            RecoveryTarget::Function(f) => (1.0 - SURROGATE_MARGIN) * f.radius().min(1.0),
        }
    }

    fn evaluate(&self, point: &MatOverB) -> Result<ComplexMatrix, FreeProbError> {
        match self {
            RecoveryTarget::Polynomial(p) => Ok(p.evaluate(point)?),
            RecoveryTarget::Function(f) => Ok(f.evaluate(point)?),
        }
    }

    /// Deterministic reference coefficients, for columns the estimates are
    /// judged against.
    fn reference(&self, max_degree: usize) -> Result<CoefficientFamily, FreeProbError> {
        match self {
            RecoveryTarget::Polynomial(p) => Ok(family_from_poly(p)),
            RecoveryTarget::Function(f) => Ok(f.extract_coefficients(max_degree)?),
        }
    }
}

/// The sampled unitary as a point of the matrix algebra over the base, so
/// polynomial and matricial-function targets can be evaluated on it.
fn sample_to_point(
    algebra: BaseAlgebra,
    sample: &HaarSample,
    n: usize,
) -> Result<MatOverB, FreeProbError> {
    let k = algebra.k;
    let entries: Vec<Vec<ComplexMatrix>> = match sample {
        HaarSample::Full(omega) => (0..n)
            .map(|r| (0..n).map(|c| omega.block(r * k, c * k, k, k)).collect())
            .collect(),
        HaarSample::Diag(omegas) => (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| {
                        ComplexMatrix::from_fn(k, k, |i, j| {
                            if i == j {
                                omegas[i].get(r, c)
                            } else {
                                cplx(0.0, 0.0)
                            }
                        })
                    })
                    .collect()
            })
            .collect(),
    };
    Ok(MatOverB::embed(algebra, n, &entries)?)
}

#[derive(Clone, Debug, Serialize)]
pub struct CoefficientRow {
    pub n: usize,
    pub samples: usize,
    pub estimate_re: f64,
    pub estimate_im: f64,
    pub stderr: f64,
}

impl CoefficientRow {
    pub fn estimate(&self) -> Complex64 {
        cplx(self.estimate_re, self.estimate_im)
    }
}

/// Monte Carlo recovery of one coefficient along the `N`-ladder.
#[derive(Clone, Debug, Serialize)]
pub struct CoefficientReport {
    pub degree: usize,
    pub tuple: Vec<usize>,
    pub reference_re: f64,
    pub reference_im: f64,
    pub rows: Vec<CoefficientRow>,
}

impl CoefficientReport {
    pub fn reference(&self) -> Complex64 {
        cplx(self.reference_re, self.reference_im)
    }

    pub fn final_row(&self) -> &CoefficientRow {
        self.rows.last().expect("ladder is nonempty")
    }
}

pub const COEFF_CSV_HEADER: &str =
    "degree,tuple,N,samples,estimate_re,estimate_im,stderr,reference_re,reference_im";

pub fn coefficient_csv(reports: &[CoefficientReport]) -> String {
    let mut out = String::from(COEFF_CSV_HEADER);
    out.push('\n');
    for rep in reports {
        let tuple = if rep.tuple.is_empty() {
            "-".to_string()
        } else {
            rep.tuple
                .iter()
                .map(usize::to_string)
                .collect::<Vec<_>>()
                .join(":")
        };
        for r in &rep.rows {
            out.push_str(&format!(
                "{},{},{},{},{:.15e},{:.15e},{:.15e},{:.15e},{:.15e}\n",
                rep.degree,
                tuple,
                r.n,
                r.samples,
                r.estimate_re,
                r.estimate_im,
                r.stderr,
                rep.reference_re,
                rep.reference_im
            ));
        }
    }
    out
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

/// Recover every coefficient of the target up to `max_degree` by pairing the
/// sampled values against the coordinate words: the words of distinct shape
/// decouple in the large-`N` limit, and each surviving overlap is inverted
/// by the algebra-dependent normalization.
///
/// One report per `(degree, tuple)` in degree-then-lex order, starting with
/// the constant term.
pub fn recover_coefficients_mc(
    target: &RecoveryTarget,
    config: &McConfig,
    max_degree: usize,
) -> Result<Vec<CoefficientReport>, FreeProbError> {
    let algebra = target.algebra();
    if algebra != config.algebra {
        return Err(FreeProbError::AlgebraMismatch);
    }
    let d = algebra.dim();
    let scale = target.surrogate_scale();
    let reference = target.reference(max_degree)?;

    let mut tuples: Vec<(usize, Vec<usize>)> = vec![(0, Vec::new())];
    for degree in 1..=max_degree {
        for t in 0..d.pow(degree as u32) {
            let mut w = vec![0usize; degree];
            let mut idx = t;
            for slot in w.iter_mut().rev() {
                *slot = idx % d;
                idx /= d;
            }
            tuples.push((degree, w));
        }
    }
    // per-degree factor turning the limiting overlap back into the coefficient
    let unscale: Vec<f64> = (0..=max_degree)
        .map(|m| {
            let overlap = match algebra.kind {
                AlgebraKind::FullMatrix => (algebra.k as f64).powi(-(m as i32)),
                AlgebraKind::Diagonal => 1.0,
            };
            1.0 / (overlap * scale.powi(m as i32))
        })
        .collect();

    let mut per_tuple: Vec<Vec<CoefficientRow>> = vec![Vec::new(); tuples.len()];
    for &n in &config.n_ladder {
        let sample_values: Result<Vec<Vec<Complex64>>, FreeProbError> = (0..config.samples)
            .into_par_iter()
            .map(|s| {
                let mut rng = config.stream(n, s);
                let sample = sample_unitary(algebra, n, &mut rng);
                let point = sample_to_point(algebra, &sample, n)?;
                let value = target.evaluate(&point.scale(cplx(scale, 0.0)))?;
                let words = all_word_values(algebra, &sample, n, max_degree);
                let id = ComplexMatrix::identity(n);
                Ok(tuples
                    .iter()
                    .map(|(degree, tuple)| {
                        let w = if tuple.is_empty() {
                            &id
                        } else {
                            &words[word_index(d, tuple)]
                        };
                        normalized_pairing(&value, w, n) * cplx(unscale[*degree], 0.0)
                    })
                    .collect())
            })
            .collect();
        let sample_values = sample_values?;
        for (slot, rows) in per_tuple.iter_mut().enumerate() {
            let values: Vec<Complex64> = sample_values.iter().map(|v| v[slot]).collect();
            let (mean, stderr) = summarize(&values);
            rows.push(CoefficientRow {
                n,
                samples: config.samples,
                estimate_re: mean.re,
                estimate_im: mean.im,
                stderr,
            });
        }
    }

    Ok(tuples
        .into_iter()
        .zip(per_tuple)
        .map(|((degree, tuple), rows)| {
            let truth = if degree <= reference.max_degree() {
                reference.get(degree, 0, &tuple)
            } else {
                cplx(0.0, 0.0)
            };
            CoefficientReport {
                degree,
                tuple,
                reference_re: truth.re,
                reference_im: truth.im,
                rows,
            }
        })
        .collect())
}
