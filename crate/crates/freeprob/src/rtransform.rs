use linalg_core::{cplx, ComplexMatrix};

use crate::error::FreeProbError;
use crate::expectation::ExpectationSetup;

pub const NEWTON_TOL: f64 = 1e-12;
pub const NEWTON_MAX_ITERS: usize = 100;

fn resolvent_factor(
    setup: &ExpectationSetup,
    b: &ComplexMatrix,
) -> Result<(ComplexMatrix, ComplexMatrix), FreeProbError> {
    let d = setup.ambient_dim();
    let ib = setup.embed(b)?;
    let lhs = ComplexMatrix::identity(d)
        .sub(&ib.multiply(setup.element())?)?
        .inverse()
        .map_err(|_| FreeProbError::OutOfDomain("1 - ba is not invertible".into()))?;
    Ok((lhs, ib))
}

/// `G_a(b) = Φ((1 - ba)⁻¹ b)`.
pub fn cauchy_g(setup: &ExpectationSetup, b: &ComplexMatrix) -> Result<ComplexMatrix, FreeProbError> {
    setup.base().check_element(b)?;
    if b.max_abs() == 0.0 {
        return Ok(ComplexMatrix::zeros(setup.base().k, setup.base().k));
    }
    let c = setup.norm_bound();
    if c > 0.0 && b.spectral_norm() >= 1.0 / c {
        return Err(FreeProbError::OutOfDomain(format!(
            "‖b‖ = {:.3e} is not below 1/‖a‖ = {:.3e}",
            b.spectral_norm(),
            1.0 / c
        )));
    }
    let (res, ib) = resolvent_factor(setup, b)?;
    setup.expect(&res.multiply(&ib)?)
}

/// Differential of the Cauchy transform: `DG_a(x)[h] = Φ((1-xa)⁻¹ h (1-ax)⁻¹)`,
/// assembled as a matrix on the canonical-basis coordinates of the base.
pub fn cauchy_g_jacobian(
    setup: &ExpectationSetup,
    x: &ComplexMatrix,
) -> Result<ComplexMatrix, FreeProbError> {
    let base = setup.base();
    let d = setup.ambient_dim();
    let (left, _) = resolvent_factor(setup, x)?;
    let right = ComplexMatrix::identity(d)
        .sub(&setup.element().multiply(&setup.embed(x)?)?)?
        .inverse()
        .map_err(|_| FreeProbError::OutOfDomain("1 - ax is not invertible".into()))?;
    let basis = base.canonical_basis();
    let dim = base.dim();
    let mut jac = ComplexMatrix::zeros(dim, dim);
    for (col, h) in basis.iter().enumerate() {
        let image = setup.expect(&left.multiply(&setup.embed(h)?)?.multiply(&right)?)?;
        for (row, coord) in base.coords(&image).into_iter().enumerate() {
            jac.set(row, col, coord);
        }
    }
    Ok(jac)
}

/// Radius inside which the Newton inversion is attempted first; halved by
/// callers on non-convergence.
pub fn suggested_inversion_radius(setup: &ExpectationSetup) -> f64 {
    let c = setup.norm_bound();
    if c == 0.0 {
        f64::INFINITY
    } else {
        1.0 / (6.0 * c)
    }
}

/// Local inverse of the Cauchy transform: Newton iteration on
/// `G_a(x) = b` started at `x₀ = b`, to residual `1e-12`.
pub fn invert_l(setup: &ExpectationSetup, b: &ComplexMatrix) -> Result<ComplexMatrix, FreeProbError> {
    let base = setup.base();
    base.check_element(b)?;
    if b.max_abs() == 0.0 {
        return Ok(ComplexMatrix::zeros(base.k, base.k));
    }
    let mut x = b.clone();
    for _ in 0..NEWTON_MAX_ITERS {
        let residual = cauchy_g(setup, &x)?.sub(b)?;
        if residual.max_abs() <= NEWTON_TOL {
            return Ok(x);
        }
        let jac = cauchy_g_jacobian(setup, &x)?;
        let inv = jac
            .inverse()
            .map_err(|_| FreeProbError::OutOfDomain("singular Cauchy differential".into()))?;
        let rhs: Vec<_> = base.coords(&residual);
        let dim = base.dim();
        let mut step = vec![cplx(0.0, 0.0); dim];
        for (row, slot) in step.iter_mut().enumerate() {
            for col in 0..dim {
                *slot += inv.get(row, col) * rhs[col];
            }
        }
        x = x.sub(&base.from_coords(&step))?;
    }
    Err(FreeProbError::NoConvergence(NEWTON_MAX_ITERS))
}

/// `H_a(b) = a(1 - ba)⁻¹`, the moment generating element in the ambient
/// algebra.
pub fn h_map(setup: &ExpectationSetup, b: &ComplexMatrix) -> Result<ComplexMatrix, FreeProbError> {
    let (res, _) = resolvent_factor(setup, b)?;
    Ok(setup.element().multiply(&res)?)
}

/// `R_a(b) = (1 + Φ(H_a(L_a(b))) L_a(b))⁻¹ Φ(H_a(L_a(b)))`.
pub fn r_transform(setup: &ExpectationSetup, b: &ComplexMatrix) -> Result<ComplexMatrix, FreeProbError> {
    let l = invert_l(setup, b)?;
    let k = setup.expect(&h_map(setup, &l)?)?;
    let front = ComplexMatrix::identity(setup.base().k)
        .add(&k.multiply(&l)?)?
        .inverse()
        .map_err(|_| FreeProbError::OutOfDomain("1 + Φ(H(L))L is not invertible".into()))?;
    Ok(front.multiply(&k)?)
}
