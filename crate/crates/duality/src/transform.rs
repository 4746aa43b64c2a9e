use grassmann::{
    entrywise_tensor, grass_diff_quotient, in_resolvent_set, resolvent, GrassPoint, ProbeMode,
};
use linalg_core::{cplx, ComplexMatrix, Rng};

use crate::error::DualityError;
use crate::setup::DualitySetup;

const FD_STEP: f64 = 1e-5;

/// `U(φ)_n(σ)`: the functional applied entrywise to the resolvent of `σ`
/// against the setup's reference point; an `n × n` scalar matrix.
pub fn transform(setup: &DualitySetup, sigma: &GrassPoint) -> Result<ComplexMatrix, DualityError> {
    let r = resolvent(setup.reference(), setup.embedding(), sigma)?;
    Ok(apply_entrywise(setup, &r))
}

fn apply_entrywise(setup: &DualitySetup, r: &ComplexMatrix) -> ComplexMatrix {
    let d = setup.embedding().target_dim();
    let n = r.rows() / d;
    ComplexMatrix::from_fn(n, n, |i, j| {
        setup.functional().apply(&r.block(i * d, j * d, d, d))
    })
}

/// Difference quotient of `U(φ)` in the coupled direction: an
/// `(m·n) × (m·n)` scalar matrix holding the coefficient of `e_ij ⊗ e_kl`
/// at row `i·n + k`, column `j·n + l`.
pub fn transform_quotient(
    setup: &DualitySetup,
    sigma1: &GrassPoint,
    sigma2: &GrassPoint,
) -> Result<ComplexMatrix, DualityError> {
    Ok(grass_diff_quotient(
        |p| {
            let u = transform(setup, p).map_err(|_| grassmann::GrassError::ProbeFailure)?;
            Ok(u)
        },
        1,
        sigma1,
        sigma2,
        ProbeMode::Exact,
    )?)
}

/// Residual of the comultiplication rule: `φ` applied entrywise to the outer
/// product of the two resolvents against minus the coupled quotient of
/// `U(φ)`.
pub fn verify_comultiplication(
    setup: &DualitySetup,
    sigma1: &GrassPoint,
    sigma2: &GrassPoint,
) -> Result<f64, DualityError> {
    let d = setup.embedding().target_dim();
    let r1 = resolvent(setup.reference(), setup.embedding(), sigma1)?;
    let r2 = resolvent(setup.reference(), setup.embedding(), sigma2)?;
    let lhs = apply_entrywise(setup, &entrywise_tensor(&r1, &r2, d)?);
    let rhs = transform_quotient(setup, sigma1, sigma2)?.neg();
    Ok(lhs.max_abs_diff(&rhs))
}

/// Residual of the trace-symmetry condition: the coupled quotient taken in
/// one order against the leg-swapped quotient taken in the other order.
/// Vanishes exactly when the functional is tracial.
pub fn verify_trace_symmetry(
    setup: &DualitySetup,
    sigma1: &GrassPoint,
    sigma2: &GrassPoint,
) -> Result<f64, DualityError> {
    let m = sigma1.level();
    let n = sigma2.level();
    let q12 = transform_quotient(setup, sigma1, sigma2)?;
    let q21 = transform_quotient(setup, sigma2, sigma1)?;
    let mut worst: f64 = 0.0;
    for i in 0..m {
        for k in 0..n {
            for j in 0..m {
                for l in 0..n {
                    let a = q12.get(i * n + k, j * n + l);
                    let b = q21.get(k * m + i, l * m + j);
                    worst = worst.max((a - b).norm());
                }
            }
        }
    }
    Ok(worst)
}

fn scaling(t: f64) -> ComplexMatrix {
    let mut g = ComplexMatrix::identity(2);
    g.set(1, 1, cplx(t.exp(), 0.0));
    g
}

/// Central difference with one Richardson step, at the shared step size.
fn richardson<F>(f: F) -> Result<ComplexMatrix, DualityError>
where
    F: Fn(f64) -> Result<ComplexMatrix, DualityError>,
{
    let slope = |h: f64| -> Result<ComplexMatrix, DualityError> {
        let plus = f(h)?;
        let minus = f(-h)?;
        Ok(plus.sub(&minus)?.scale(cplx(0.5 / h, 0.0)))
    };
    let coarse = slope(FD_STEP)?;
    let fine = slope(FD_STEP / 2.0)?;
    Ok(fine
        .scale(cplx(4.0 / 3.0, 0.0))
        .sub(&coarse.scale(cplx(1.0 / 3.0, 0.0)))?)
}

/// Residual of the coderivation duality: the derivative of the resolvent
/// under scaling of the reference point (after `φ`) against minus the
/// derivative of `U(φ)` under the opposite scaling of the argument.
pub fn verify_lambda_duality(
    setup: &DualitySetup,
    sigma: &GrassPoint,
) -> Result<f64, DualityError> {
    let pi = setup.reference();
    let emb = setup.embedding();
    let pi_side = richardson(|t| {
        let moved = pi.gl2_scalar(&scaling(t))?;
        let r = resolvent(&moved, emb, sigma)?;
        Ok(r.scale(cplx(t.exp(), 0.0)))
    })?;
    let lhs = apply_entrywise(setup, &pi_side);

    let sigma_side = richardson(|t| {
        let moved = sigma.gl2_scalar(&scaling(t))?;
        transform(setup, &moved)
    })?;
    Ok(lhs.max_abs_diff(&sigma_side.neg()))
}

/// Exact form of the scaling identity behind the coderivation duality, at a
/// single finite `t`: `R̃(scale_t·π)(σ) = e^{-t}·R̃(π)(scale_{-t}·σ)`.
pub fn scaling_identity_residual(
    setup: &DualitySetup,
    sigma: &GrassPoint,
    t: f64,
) -> Result<f64, DualityError> {
    let pi = setup.reference();
    let emb = setup.embedding();
    let lhs = resolvent(&pi.gl2_scalar(&scaling(t))?, emb, sigma)?;
    let rhs = resolvent(pi, emb, &sigma.gl2_scalar(&scaling(-t))?)?
        .scale(cplx((-t).exp(), 0.0));
    Ok(lhs.max_abs_diff(&rhs))
}

/// Residual of the involution rule `(U_π(φ)(σ))* = U_{π*}(φ*)(σ*)`.
pub fn verify_star_duality(
    setup: &DualitySetup,
    sigma: &GrassPoint,
) -> Result<f64, DualityError> {
    let lhs = transform(setup, sigma)?.adjoint();
    let rhs = transform(&setup.star(), &sigma.star())?;
    Ok(lhs.max_abs_diff(&rhs))
}

/// Numerical rank of `φ ↦ (entries of U(φ) on a fixed random sample of
/// level-2 points)`. Level 2 matters: off-diagonal resolvent entries carry
/// products of level-1 values, which is what lets the columns span all of
/// the dual. Full rank `d²` certifies that no nonzero functional is
/// annihilated by the sampled family; a short rank only means the sample was
/// insufficient.
pub fn injectivity_rank(setup: &DualitySetup, rng: &mut Rng) -> Result<usize, DualityError> {
    let d = setup.embedding().target_dim();
    let b = setup.embedding().source();
    let functionals = base_algebra::dual_basis(setup.embedding().target_algebra());
    let samples = 2 * d * d;
    let mut entries: Vec<ComplexMatrix> = Vec::with_capacity(4 * samples);
    let mut attempts = 0;
    while entries.len() < 4 * samples {
        attempts += 1;
        if attempts > 200 * samples {
            return Err(DualityError::Shape(
                "could not sample enough resolvent-set points".into(),
            ));
        }
        let beta = base_algebra::MatOverB::random(b, 2, rng, 1.0);
        let sigma = GrassPoint::from_affine(&beta);
        if !in_resolvent_set(setup.reference(), setup.embedding(), &sigma)? {
            continue;
        }
        let r = resolvent(setup.reference(), setup.embedding(), &sigma)?;
        for i in 0..2 {
            for j in 0..2 {
                entries.push(r.block(i * d, j * d, d, d));
            }
        }
    }
    let a = ComplexMatrix::from_fn(functionals.len(), entries.len(), |i, j| {
        functionals[i].apply(&entries[j])
    });
    let gram = a.multiply(&a.adjoint())?;
    let eigs = gram.hermitian_eigenvalues()?;
    let scale = eigs.iter().cloned().fold(0.0f64, f64::max).max(1e-30);
    Ok(eigs.iter().filter(|&&e| e > 1e-10 * scale).count())
}
