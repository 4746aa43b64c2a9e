use base_algebra::MatOverB;
use linalg_core::{cplx, Complex64, ComplexMatrix};

use crate::error::GrassError;
use crate::point::GrassPoint;

const UNITARY_TOL: f64 = 1e-9;

/// Matricial domains carved out of the Grassmannian by fractional-linear
/// images of the unit-ball set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiskKind {
    /// Affine points `x` with `‖x‖ < 1`.
    UnitBall,
    /// Image of the unit ball under the coordinate swap; contains the point
    /// at infinity.
    AtInfinity,
    /// Cayley image of the unit ball: affine points with positive imaginary
    /// part.
    UpperHalf,
    LowerHalf,
    /// Boundary case: affine points whose value is a unitary.
    Unitary,
    /// `Mixed(p, q)`: the ball moved by the signature `(p, q)` permutation
    /// scalar; lives at level `p + q`.
    Mixed(usize, usize),
}

fn mobius_inverse(kind: DiskKind) -> Option<[[Complex64; 2]; 2]> {
    let one = cplx(1.0, 0.0);
    let zero = cplx(0.0, 0.0);
    let ih = cplx(0.0, 0.5);
    let h = cplx(0.5, 0.0);
    match kind {
        DiskKind::UnitBall => Some([[one, zero], [zero, one]]),
        DiskKind::AtInfinity => Some([[zero, one], [one, zero]]),
        DiskKind::UpperHalf => Some([[ih, h], [-ih, h]]),
        DiskKind::LowerHalf => Some([[-ih, h], [ih, h]]),
        _ => None,
    }
}

/// Strict membership test. The point's `(b, d)` column is pulled back by the
/// defining fractional-linear map and the ball condition
/// `M₁ invertible, ‖M₂M₁⁻¹‖ < 1` is evaluated on the pullback.
pub fn in_disk(kind: DiskKind, sigma: &GrassPoint) -> Result<bool, GrassError> {
    match kind {
        DiskKind::Unitary => {
            let (_, b, _, d) = sigma.blocks();
            if !b.is_invertible() {
                return Ok(false);
            }
            let u = d.mul(&b.invert()?)?;
            let gram = u.involution().mul(&u)?;
            let id = MatOverB::identity(gram.algebra(), gram.level());
            Ok(gram.max_abs_diff(&id) <= UNITARY_TOL)
        }
        DiskKind::Mixed(p, q) => {
            if sigma.level() != p + q {
                return Err(GrassError::LevelMismatch(sigma.level(), p + q));
            }
            let moved = sigma.big_scalar_action(&mixed_g_matrix(p, q))?;
            in_disk(DiskKind::UnitBall, &moved)
        }
        _ => {
            let rows = mobius_inverse(kind).expect("scalar kinds are covered above");
            let (_, b, _, d) = sigma.blocks();
            let m1 = b.scale(rows[0][0]).add(&d.scale(rows[0][1]))?;
            let m2 = b.scale(rows[1][0]).add(&d.scale(rows[1][1]))?;
            if !m1.is_invertible() {
                return Ok(false);
            }
            Ok(m2.mul(&m1.invert()?)?.norm() < 1.0)
        }
    }
}

/// The permutation scalar `g` with `Mixed(p, q) = g · UnitBall` at level
/// `p + q`; `g` is self-inverse.
pub fn mixed_g_matrix(p: usize, q: usize) -> ComplexMatrix {
    let n = p + q;
    let mut g = ComplexMatrix::zeros(2 * n, 2 * n);
    let one = cplx(1.0, 0.0);
    for i in 0..p {
        g.set(i, i, one);
        g.set(n + i, n + i, one);
    }
    for j in 0..q {
        g.set(p + j, n + p + j, one);
        g.set(n + p + j, p + j, one);
    }
    g
}

/// The canonical representative of the `Mixed(p, q)` point attached to a
/// level-`p + q` contraction `w`: identity scaffolding with the four blocks
/// of `w` spread over the `(2, 3)`, `(2, 4)`, `(3, 3)`, `(3, 4)` slots of the
/// row groups `[0,p), [p,n), [n,n+p), [n+p,2n)`.
pub fn mixed_ball_point(
    p: usize,
    q: usize,
    w: &MatOverB,
) -> Result<GrassPoint, GrassError> {
    let n = p + q;
    if w.level() != n {
        return Err(GrassError::LevelMismatch(w.level(), n));
    }
    let algebra = w.algebra();
    let one = algebra.identity_element();
    let mut rep = MatOverB::zeros(algebra, 2 * n);
    for i in 0..p {
        rep.set_entry(i, n + i, &one)?;
        rep.set_entry(n + i, i, &one)?;
    }
    for j in 0..q {
        rep.set_entry(p + j, p + j, &one)?;
        rep.set_entry(n + p + j, n + p + j, &one)?;
    }
    for j in 0..q {
        for i in 0..p {
            rep.set_entry(p + j, n + i, &w.extract_entry(p + j, i)?)?;
        }
        for j2 in 0..q {
            rep.set_entry(p + j, n + p + j2, &w.extract_entry(p + j, p + j2)?)?;
        }
    }
    for i in 0..p {
        for i2 in 0..p {
            rep.set_entry(n + i, n + i2, &w.extract_entry(i, i2)?)?;
        }
        for j in 0..q {
            rep.set_entry(n + i, n + p + j, &w.extract_entry(i, p + j)?)?;
        }
    }
    GrassPoint::from_rep(&rep)
}
