use linalg_core::{cplx, Complex64, ComplexMatrix};

use crate::error::GrassError;
use crate::point::GrassPoint;

const FD_STEP: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProbeMode {
    /// Single probe at ε = 1; valid when the ε-dependence is exactly linear,
    /// which holds for resolvents and their entrywise images.
    Exact,
    /// Central difference at ε = ±1e-3.
    FiniteDifference,
}

/// The coupled point: `σ′ ⊕ σ″` with the `d`-block perturbed by `ε·t·b″` in
/// its upper-right corner, `t` an `m × n` scalar matrix.
pub fn probe_point(
    sigma1: &GrassPoint,
    sigma2: &GrassPoint,
    t: &ComplexMatrix,
    eps: Complex64,
) -> Result<GrassPoint, GrassError> {
    if sigma1.algebra() != sigma2.algebra() {
        return Err(GrassError::AlgebraMismatch);
    }
    let m = sigma1.level();
    let n = sigma2.level();
    if t.rows() != m || t.cols() != n {
        return Err(GrassError::Shape(format!(
            "probe block must be {m}×{n}, got {}×{}",
            t.rows(),
            t.cols()
        )));
    }
    let (a1, b1, c1, d1) = sigma1.blocks();
    let (a2, b2, c2, d2) = sigma2.blocks();
    let a = a1.direct_sum(a2)?;
    let b = b1.direct_sum(b2)?;
    let c = c1.direct_sum(c2)?;
    let mut d = d1.direct_sum(d2)?;
    for i in 0..m {
        for v in 0..n {
            let mut acc = ComplexMatrix::zeros(0, 0);
            let mut first = true;
            for r in 0..n {
                let w = eps * t.get(i, r);
                if w.norm() == 0.0 {
                    continue;
                }
                let piece = b2.extract_entry(r, v)?.scale(w);
                acc = if first { piece } else { acc.add(&piece)? };
                first = false;
            }
            if !first {
                d.set_entry(i, m + v, &acc)?;
            }
        }
    }
    GrassPoint::new(a, b, c, d).map_err(|_| GrassError::ProbeFailure)
}

/// Difference quotient of an evaluator on Grassmannian points.
///
/// `f` must map a level-`L` point to an `(L·q) × (L·q)` matrix whose `q × q`
/// blocks are the `E`-valued entries (`q = out_dim`; `q = 1` for
/// scalar-valued maps). The result is the `(m·n·q)²` matrix with the
/// coefficient of `e_ij ⊗ e_kl` stored as the `q × q` block at row group
/// `i·n + k`, column group `j·n + l`.
pub fn grass_diff_quotient<F>(
    f: F,
    out_dim: usize,
    sigma1: &GrassPoint,
    sigma2: &GrassPoint,
    mode: ProbeMode,
) -> Result<ComplexMatrix, GrassError>
where
    F: Fn(&GrassPoint) -> Result<ComplexMatrix, GrassError>,
{
    let m = sigma1.level();
    let n = sigma2.level();
    let q = out_dim;
    let total = m + n;
    let corner = |full: &ComplexMatrix| -> Result<ComplexMatrix, GrassError> {
        if full.rows() != total * q || full.cols() != total * q {
            return Err(GrassError::Shape(format!(
                "evaluator returned {}×{}, expected {}×{}",
                full.rows(),
                full.cols(),
                total * q,
                total * q
            )));
        }
        Ok(full.block(0, m * q, m * q, n * q))
    };

    let unit = |j: usize, k: usize| ComplexMatrix::matrix_unit_rect(m, n, j, k);
    let base = corner(&f(&probe_point(sigma1, sigma2, &unit(0, 0), cplx(0.0, 0.0))?)?)?;

    let mut out = ComplexMatrix::zeros(m * n * q, m * n * q);
    for j in 0..m {
        for k in 0..n {
            let t = unit(j, k);
            let slope = match mode {
                ProbeMode::Exact => {
                    let val = corner(&f(&probe_point(sigma1, sigma2, &t, cplx(1.0, 0.0))?)?)?;
                    val.sub(&base)?
                }
                ProbeMode::FiniteDifference => {
                    let plus =
                        corner(&f(&probe_point(sigma1, sigma2, &t, cplx(FD_STEP, 0.0))?)?)?;
                    let minus =
                        corner(&f(&probe_point(sigma1, sigma2, &t, cplx(-FD_STEP, 0.0))?)?)?;
                    plus.sub(&minus)?.scale(cplx(0.5 / FD_STEP, 0.0))
                }
            };
            for i in 0..m {
                for l in 0..n {
                    let blk = slope.block(i * q, l * q, q, q);
                    out.set_block((i * n + k) * q, (j * n + l) * q, &blk);
                }
            }
        }
    }
    Ok(out)
}

/// The `q × q` block of a difference-quotient matrix at coefficient
/// `e_ij ⊗ e_kl`.
pub fn quotient_block(
    d: &ComplexMatrix,
    n: usize,
    q: usize,
    i: usize,
    k: usize,
    j: usize,
    l: usize,
) -> ComplexMatrix {
    d.block((i * n + k) * q, (j * n + l) * q, q, q)
}

/// `r1 ⊗_E r2`: the `(m·n·q)²` matrix whose block at `e_ij ⊗ e_kl` is the
/// `E`-product `(r1)_ij·(r2)_kl` of the `q × q` entries.
pub fn entrywise_tensor(
    r1: &ComplexMatrix,
    r2: &ComplexMatrix,
    q: usize,
) -> Result<ComplexMatrix, GrassError> {
    if r1.rows() % q != 0 || r2.rows() % q != 0 {
        return Err(GrassError::Shape(format!(
            "entry size {q} does not divide operand sizes {} and {}",
            r1.rows(),
            r2.rows()
        )));
    }
    let m = r1.rows() / q;
    let n = r2.rows() / q;
    let mut out = ComplexMatrix::zeros(m * n * q, m * n * q);
    for i in 0..m {
        for j in 0..m {
            let left = r1.block(i * q, j * q, q, q);
            for k in 0..n {
                for l in 0..n {
                    let right = r2.block(k * q, l * q, q, q);
                    out.set_block((i * n + k) * q, (j * n + l) * q, &left.multiply(&right)?);
                }
            }
        }
    }
    Ok(out)
}
