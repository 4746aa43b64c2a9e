use std::sync::Arc;

use base_algebra::{BaseAlgebra, MatOverB};
use linalg_core::{cplx, Complex64, ComplexMatrix};
use ncpoly::NCPoly;

use crate::error::CalcError;

/// How off-diagonal probe blocks are differentiated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockMode {
    /// One evaluation per matrix unit at unit probe scale; valid when the
    /// off-diagonal block is exactly linear in the probe (polynomials,
    /// resolvents). A scale-consistency audit still runs per call.
    Exact,
    /// Central finite difference in the probe scale; for evaluators whose
    /// linearity is not guaranteed a priori.
    FiniteDifference,
}

type Evaluator = dyn Fn(&MatOverB) -> Result<ComplexMatrix, CalcError> + Send + Sync;

/// Fully matricial scalar-valued function given by an evaluator
/// `M_n(B) → M_n(C)` for every level `n`, declared on `‖β‖ < radius`.
#[derive(Clone)]
pub struct MatricialFn {
    algebra: BaseAlgebra,
    radius: f64,
    mode: BlockMode,
    evaluator: Arc<Evaluator>,
}

impl MatricialFn {
    pub fn from_fn(
        algebra: BaseAlgebra,
        radius: f64,
        mode: BlockMode,
        f: impl Fn(&MatOverB) -> Result<ComplexMatrix, CalcError> + Send + Sync + 'static,
    ) -> Self {
        MatricialFn {
            algebra,
            radius,
            mode,
            evaluator: Arc::new(f),
        }
    }

    /// Polynomial evaluator; block probes are exactly linear for these.
    pub fn from_poly(p: &NCPoly, radius: f64) -> Self {
        let poly = p.clone();
        MatricialFn {
            algebra: p.algebra(),
            radius,
            mode: BlockMode::Exact,
            evaluator: Arc::new(move |beta| Ok(poly.evaluate(beta)?)),
        }
    }

    pub fn algebra(&self) -> BaseAlgebra {
        self.algebra
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn mode(&self) -> BlockMode {
        self.mode
    }

    pub fn evaluate(&self, beta: &MatOverB) -> Result<ComplexMatrix, CalcError> {
        if beta.algebra() != self.algebra {
            return Err(CalcError::FamilyShape(
                "evaluation point lives over a different algebra".into(),
            ));
        }
        let nrm = beta.max_abs();
        if nrm.is_finite() && nrm > self.radius {
            // max_abs is a cheap lower bound for the operator norm; only
            // reject what is certainly outside.
            return Err(CalcError::OutsideDomain(nrm, self.radius));
        }
        (self.evaluator)(beta)
    }
}

/// The triangular probe `[[β′, t ⊗ 1_B], [0, β″]]` at level `m + n`.
fn affine_probe(
    beta1: &MatOverB,
    beta2: &MatOverB,
    t: &ComplexMatrix,
) -> Result<MatOverB, CalcError> {
    let m = beta1.level();
    let id_b = beta1.algebra().identity_element();
    let mut p = beta1.direct_sum(beta2)?;
    for i in 0..t.rows() {
        for j in 0..t.cols() {
            let z = t.get(i, j);
            if z.norm() != 0.0 {
                p.set_entry(i, m + j, &id_b.scale(z))?;
            }
        }
    }
    Ok(p)
}

/// Off-diagonal block of `f` at the probe built from `t`.
fn probe_block(
    f: &MatricialFn,
    beta1: &MatOverB,
    beta2: &MatOverB,
    t: &ComplexMatrix,
) -> Result<ComplexMatrix, CalcError> {
    let m = beta1.level();
    let n = beta2.level();
    let value = f.evaluate(&affine_probe(beta1, beta2, t)?)?;
    Ok(value.block(0, m, m, n))
}

/// Slope of the off-diagonal block along one matrix unit.
fn block_slope(
    f: &MatricialFn,
    beta1: &MatOverB,
    beta2: &MatOverB,
    j: usize,
    k: usize,
) -> Result<ComplexMatrix, CalcError> {
    let m = beta1.level();
    let n = beta2.level();
    match f.mode() {
        BlockMode::Exact => {
            let unit = ComplexMatrix::matrix_unit_rect(m, n, j, k);
            probe_block(f, beta1, beta2, &unit)
        }
        BlockMode::FiniteDifference => {
            let eps = 1e-3;
            let unit = ComplexMatrix::matrix_unit_rect(m, n, j, k);
            let plus = probe_block(f, beta1, beta2, &unit.scale(cplx(eps, 0.0)))?;
            let minus = probe_block(f, beta1, beta2, &unit.scale(cplx(-eps, 0.0)))?;
            Ok(plus.sub(&minus)?.scale(cplx(0.5 / eps, 0.0)))
        }
    }
}

/// Linearity audit for exact mode: the block at scales ε and 2ε must agree
/// after normalization.
fn audit_linearity(
    f: &MatricialFn,
    beta1: &MatOverB,
    beta2: &MatOverB,
) -> Result<(), CalcError> {
    let m = beta1.level();
    let n = beta2.level();
    let eps = 1e-3;
    let unit = ComplexMatrix::matrix_unit_rect(m, n, 0, 0);
    let b1 = probe_block(f, beta1, beta2, &unit.scale(cplx(eps, 0.0)))?;
    let b2 = probe_block(f, beta1, beta2, &unit.scale(cplx(2.0 * eps, 0.0)))?;
    let dev = b2.sub(&b1.scale(cplx(2.0, 0.0)))?.max_abs();
    if dev > 1e-9 * b2.max_abs().max(1.0) {
        return Err(CalcError::NonlinearProbe(dev));
    }
    Ok(())
}

/// Difference quotient at the affine pair `(β′, β″)`: the element of
/// `M_m ⊗ M_n` whose action on probes reproduces the off-diagonal block,
/// returned as an `mn × mn` matrix with the level-`m` index outermost:
/// `D[(i,k),(j,l)]` is entry `(i·n+k, j·n+l)`.
pub fn diff_quotient(
    f: &MatricialFn,
    beta1: &MatOverB,
    beta2: &MatOverB,
) -> Result<ComplexMatrix, CalcError> {
    let m = beta1.level();
    let n = beta2.level();
    if f.mode() == BlockMode::Exact {
        audit_linearity(f, beta1, beta2)?;
    }
    let mut out = ComplexMatrix::zeros(m * n, m * n);
    for j in 0..m {
        for k in 0..n {
            let t = block_slope(f, beta1, beta2, j, k)?;
            for i in 0..m {
                for l in 0..n {
                    out.set(i * n + k, j * n + l, t.get(i, l));
                }
            }
        }
    }
    Ok(out)
}

/// Entry `D[(i,k),(j,l)]` of an `M_m ⊗ M_n` tensor stored with inner
/// dimension `n`.
pub fn tensor_entry(
    d: &ComplexMatrix,
    n_inner: usize,
    i: usize,
    k: usize,
    j: usize,
    l: usize,
) -> Complex64 {
    d.get(i * n_inner + k, j * n_inner + l)
}

/// Iterated difference quotient in `M_m ⊗ M_n ⊗ M_p`, computed by both
/// association orders — splitting the right pair first and the left pair
/// first — and checked for agreement. The two orders evaluate `f` at
/// genuinely different probe families; their agreement is the
/// coassociativity of the quotient.
pub fn diff_quotient_nested(
    f: &MatricialFn,
    beta1: &MatOverB,
    beta2: &MatOverB,
    beta3: &MatOverB,
) -> Result<ComplexMatrix, CalcError> {
    const NESTED_TOL: f64 = 1e-8;
    let (m, n, p) = (beta1.level(), beta2.level(), beta3.level());
    let size = m * n * p;
    let row = |i: usize, k: usize, u: usize| (i * n + k) * p + u;
    let mut e_a = ComplexMatrix::zeros(size, size);
    let mut e_b = ComplexMatrix::zeros(size, size);

    // Right-first: fix the inner probe e_lu in the (β″, β‴) corner, take the
    // outer quotient against level n+p, and read the far off-diagonal part.
    for l in 0..n {
        for u in 0..p {
            let inner = affine_probe(beta2, beta3, &ComplexMatrix::matrix_unit_rect(n, p, l, u))?;
            let q = diff_quotient(f, beta1, &inner)?;
            for i in 0..m {
                for k in 0..n {
                    for j in 0..m {
                        for v in 0..p {
                            let val = tensor_entry(&q, n + p, i, k, j, n + v);
                            e_a.set(row(i, k, u), row(j, l, v), val);
                        }
                    }
                }
            }
        }
    }

    // Left-first: fix e_jk in the (β′, β″) corner, quotient against β‴.
    for j in 0..m {
        for k in 0..n {
            let inner = affine_probe(beta1, beta2, &ComplexMatrix::matrix_unit_rect(m, n, j, k))?;
            let q = diff_quotient(f, &inner, beta3)?;
            for i in 0..m {
                for l in 0..n {
                    for u in 0..p {
                        for v in 0..p {
                            let val = tensor_entry(&q, p, i, u, m + l, v);
                            e_b.set(row(i, k, u), row(j, l, v), val);
                        }
                    }
                }
            }
        }
    }

    let dev = e_a.max_abs_diff(&e_b);
    if dev > NESTED_TOL {
        return Err(CalcError::CoassociativityViolated(dev, NESTED_TOL));
    }
    Ok(e_a)
}

/// Numeric grading derivative `d/dt (e^t f(e^t β))|₀` by central difference
/// with one Richardson step.
pub fn lambda_numeric(f: &MatricialFn, beta: &MatOverB) -> Result<ComplexMatrix, CalcError> {
    let g = |t: f64| -> Result<ComplexMatrix, CalcError> {
        let s = t.exp();
        let v = f.evaluate(&beta.scale(cplx(s, 0.0)))?;
        Ok(v.scale(cplx(s, 0.0)))
    };
    let h = 1e-5;
    let central = |h: f64| -> Result<ComplexMatrix, CalcError> {
        Ok(g(h)?.sub(&g(-h)?)?.scale(cplx(0.5 / h, 0.0)))
    };
    let d1 = central(h)?;
    let d2 = central(0.5 * h)?;
    Ok(d2
        .scale(cplx(4.0 / 3.0, 0.0))
        .sub(&d1.scale(cplx(1.0 / 3.0, 0.0)))?)
}

/// Largest deviation of `f` from the direct-sum and similarity laws at one
/// sampled configuration; a cheap audit that an evaluator is actually
/// fully matricial.
pub fn matricial_law_residual(
    f: &MatricialFn,
    beta1: &MatOverB,
    beta2: &MatOverB,
    s: &ComplexMatrix,
) -> Result<f64, CalcError> {
    let whole = f.evaluate(&beta1.direct_sum(beta2)?)?;
    let part1 = f.evaluate(beta1)?;
    let part2 = f.evaluate(beta2)?;
    let sum_dev = whole.max_abs_diff(&part1.direct_sum(&part2));

    let alg = f.algebra();
    let s_inv = s.inverse()?;
    let conj = MatOverB::scalar_matrix(alg, s)
        .mul(beta1)?
        .mul(&MatOverB::scalar_matrix(alg, &s_inv))?;
    let lhs = f.evaluate(&conj)?;
    let rhs = s.multiply(&part1)?.multiply(&s_inv)?;
    Ok(sum_dev.max(lhs.max_abs_diff(&rhs)))
}
