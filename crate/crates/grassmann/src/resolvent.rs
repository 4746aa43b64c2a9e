use linalg_core::{cplx, ComplexMatrix};
use serde::Serialize;

use crate::embedding::Embedding;
use crate::error::GrassError;
use crate::point::{cayley_matrix, gl2_swap, GrassPoint};

fn check_setup(
    pi: &GrassPoint,
    emb: &Embedding,
    sigma: &GrassPoint,
) -> Result<(), GrassError> {
    if pi.level() != 1 {
        return Err(GrassError::LevelMismatch(pi.level(), 1));
    }
    if pi.algebra() != emb.target_algebra() {
        return Err(GrassError::AlgebraMismatch);
    }
    if sigma.algebra() != emb.source() {
        return Err(GrassError::AlgebraMismatch);
    }
    Ok(())
}

/// The stacked matrix `[[I_n⊗b, β],[I_n⊗d, δ]]` over `E`, size `2nd`.
fn stacked(
    pi: &GrassPoint,
    emb: &Embedding,
    sigma: &GrassPoint,
) -> Result<ComplexMatrix, GrassError> {
    check_setup(pi, emb, sigma)?;
    let n = sigma.level();
    let id_n = ComplexMatrix::identity(n);
    let (_, b, _, d) = pi.blocks();
    let top_left = id_n.kron(&b.extract_entry(0, 0)?);
    let bot_left = id_n.kron(&d.extract_entry(0, 0)?);
    let (_, beta, _, delta) = sigma.blocks();
    let top_right = emb.apply_level(beta)?;
    let bot_right = emb.apply_level(delta)?;
    Ok(ComplexMatrix::from_blocks(&[
        vec![&top_left, &top_right],
        vec![&bot_left, &bot_right],
    ])?)
}

pub fn in_resolvent_set(
    pi: &GrassPoint,
    emb: &Embedding,
    sigma: &GrassPoint,
) -> Result<bool, GrassError> {
    Ok(stacked(pi, emb, sigma)?.is_invertible())
}

/// `R̃_n(π;B)(σ) = β·ζ` with `ζ` the `(2,2)` block of the inverse of the
/// stacked matrix; an `n × n` matrix of `E`-entries, returned densely.
pub fn resolvent(
    pi: &GrassPoint,
    emb: &Embedding,
    sigma: &GrassPoint,
) -> Result<ComplexMatrix, GrassError> {
    let s = stacked(pi, emb, sigma)?;
    let inv = s.inverse().map_err(|_| GrassError::NotInResolventSet)?;
    let nd = s.rows() / 2;
    let zeta = inv.block(nd, nd, nd, nd);
    let beta = emb.apply_level(sigma.blocks().1)?;
    Ok(beta.multiply(&zeta)?)
}

/// Closed form `β(x′β + y′δ)⁻¹y′` where `((x,y),(z,t))` is the inverse of
/// `π`'s representative and primes are `n`-fold amplifications.
pub fn resolvent_closed_form(
    pi: &GrassPoint,
    emb: &Embedding,
    sigma: &GrassPoint,
) -> Result<ComplexMatrix, GrassError> {
    check_setup(pi, emb, sigma)?;
    let d = emb.target_dim();
    let rep_inv = pi
        .rep()
        .to_full()
        .inverse()
        .map_err(|_| GrassError::NotInvertible)?;
    let id_n = ComplexMatrix::identity(sigma.level());
    let x = id_n.kron(&rep_inv.block(0, 0, d, d));
    let y = id_n.kron(&rep_inv.block(0, d, d, d));
    let beta = emb.apply_level(sigma.blocks().1)?;
    let delta = emb.apply_level(sigma.blocks().3)?;
    let mid = x
        .multiply(&beta)?
        .add(&y.multiply(&delta)?)?
        .inverse()
        .map_err(|_| GrassError::NotInResolventSet)?;
    Ok(beta.multiply(&mid)?.multiply(&y)?)
}

/// Residual of `(R̃_n(π;B)(σ))* = R̃_n(π*;B)(σ*)`.
pub fn resolvent_star_residual(
    pi: &GrassPoint,
    emb: &Embedding,
    sigma: &GrassPoint,
) -> Result<f64, GrassError> {
    let lhs = resolvent(pi, emb, sigma)?.adjoint();
    let rhs = resolvent(&pi.star(), emb, &sigma.star())?;
    Ok(lhs.max_abs_diff(&rhs))
}

/// Residuals of the two resolvent identities tying an invertible `u`, its
/// inverse, and the half-plane transform `χ = C((-i,i),(1,1))·u`:
///
/// a) `(I⊗u)·R̃(u)(σ)·(I⊗u) + I⊗u = -R̃(u⁻¹)(σ⁻¹)` with
///    `σ⁻¹ = C((0,1),(1,0))σ`;
/// c) `R̃(χ)(ν) = (i/2)·R̃(u⁻¹)(σ⁻¹)·(I⊗(1-u⁻¹)) - (i/2)·R̃(u)(σ)·(I⊗(1-u))`
///    with `ν = C((-i,i),(1,1))σ`.
#[derive(Clone, Debug, Serialize)]
pub struct UnitaryReport {
    pub residual_a: Option<f64>,
    pub residual_c: Option<f64>,
    pub failures: Vec<String>,
}

pub fn unitary_identities(
    u: &ComplexMatrix,
    emb: &Embedding,
    sigma: &GrassPoint,
) -> Result<UnitaryReport, GrassError> {
    let d = emb.target_dim();
    if u.rows() != d || u.cols() != d {
        return Err(GrassError::Shape(format!(
            "element size {}×{} does not match the target algebra M_{d}",
            u.rows(),
            u.cols()
        )));
    }
    let alg_e = emb.target_algebra();
    let u_inv = u.inverse().map_err(|_| GrassError::NotInvertible)?;
    let pi_u = GrassPoint::graph_of(alg_e, u)?;
    let pi_u_inv = GrassPoint::graph_of(alg_e, &u_inv)?;
    let sigma_inv = sigma.gl2_scalar(&gl2_swap())?;

    let mut report = UnitaryReport {
        residual_a: None,
        residual_c: None,
        failures: Vec::new(),
    };

    let r_u = match resolvent(&pi_u, emb, sigma) {
        Ok(r) => r,
        Err(e) => {
            report.failures.push(format!("sigma outside resolvent set of u: {e}"));
            return Ok(report);
        }
    };
    let r_u_inv = match resolvent(&pi_u_inv, emb, &sigma_inv) {
        Ok(r) => r,
        Err(e) => {
            report
                .failures
                .push(format!("swapped sigma outside resolvent set of u^-1: {e}"));
            return Ok(report);
        }
    };

    let n = sigma.level();
    let id_n = ComplexMatrix::identity(n);
    let u_amp = id_n.kron(u);
    let lhs_a = u_amp.multiply(&r_u)?.multiply(&u_amp)?.add(&u_amp)?;
    report.residual_a = Some(lhs_a.max_abs_diff(&r_u_inv.neg()));

    let cayley = cayley_matrix();
    let nu = sigma.gl2_scalar(&cayley)?;
    let chi = pi_u.gl2_scalar(&cayley)?;
    match resolvent(&chi, emb, &nu) {
        Ok(r_chi) => {
            let one = ComplexMatrix::identity(d);
            let half_i = cplx(0.0, 0.5);
            let term_inv = r_u_inv
                .multiply(&id_n.kron(&one.sub(&u_inv)?))?
                .scale(half_i);
            let term_u = r_u.multiply(&id_n.kron(&one.sub(u)?))?.scale(half_i);
            report.residual_c = Some(r_chi.max_abs_diff(&term_inv.sub(&term_u)?));
        }
        Err(e) => {
            report
                .failures
                .push(format!("transformed sigma outside resolvent set of chi: {e}"));
        }
    }
    Ok(report)
}
