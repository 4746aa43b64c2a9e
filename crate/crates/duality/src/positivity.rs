use grassmann::GrassPoint;
use linalg_core::{cplx, ComplexMatrix};
use serde::Serialize;

use crate::error::DualityError;
use crate::setup::DualitySetup;
use crate::transform::transform_quotient;

const CP_TOL: f64 = 1e-8;
const HERMITICITY_TOL: f64 = 1e-7;

#[derive(Clone, Debug, Serialize)]
pub struct PositivityReport {
    pub min_choi_eigenvalue: f64,
    /// Distance of the assembled Choi matrix from its own adjoint before
    /// symmetrization; large values void the eigenvalue reading.
    pub hermiticity_gap: f64,
    pub is_cp: bool,
}

/// Choi matrix of the map `t ↦ -∇U(φ)(σ, σ*)(t)`, assembled from the coupled
/// difference quotient: entry ((i,r),(l,s)) is the value of the map on e_rs,
/// read at (i,l), which in quotient coordinates is -q[(i,s),(r,l)].
pub fn choi_matrix(
    setup: &DualitySetup,
    sigma: &GrassPoint,
) -> Result<ComplexMatrix, DualityError> {
    let n = sigma.level();
    let q = transform_quotient(setup, sigma, &sigma.star())?;
    Ok(ComplexMatrix::from_fn(n * n, n * n, |row, col| {
        let (i, r) = (row / n, row % n);
        let (l, s) = (col / n, col % n);
        -q.get(i * n + s, r * n + l)
    }))
}

/// Complete-positivity certificate for `t ↦ -∇U(φ)(σ, σ*)(t)`: assemble the
/// Choi matrix and report its minimal eigenvalue. Requires a hermitian
/// reference point.
pub fn dual_positivity_check(
    setup: &DualitySetup,
    sigma: &GrassPoint,
) -> Result<PositivityReport, DualityError> {
    let pi = setup.reference();
    if !pi.equivalent(&pi.star())? {
        return Err(DualityError::NotHermitian);
    }
    let theta = choi_matrix(setup, sigma)?;
    let hermiticity_gap = theta.max_abs_diff(&theta.adjoint());
    let sym = theta.add(&theta.adjoint())?.scale(cplx(0.5, 0.0));
    let min_choi_eigenvalue = sym.hermitian_min_eigenvalue()?;
    Ok(PositivityReport {
        min_choi_eigenvalue,
        hermiticity_gap,
        is_cp: min_choi_eigenvalue >= -CP_TOL && hermiticity_gap <= HERMITICITY_TOL,
    })
}
