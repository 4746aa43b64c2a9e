use base_algebra::{BaseAlgebra, MatOverB};
use linalg_core::{cplx, ComplexMatrix};

use crate::error::GrassError;

/// A point of the level-`n` Grassmannian over `B`, stored as an invertible
/// representative `((a,b),(c,d))` in `GL_2(M_n(B))`.
///
/// The point itself is the `(b,d)` column up to right multiplication by an
/// invertible `t ∈ M_n(B)`; the `(a,c)` column only certifies that `(b,d)`
/// has an invertible complement. All constructors check invertibility of the
/// full representative.
#[derive(Clone, Debug)]
pub struct GrassPoint {
    algebra: BaseAlgebra,
    n: usize,
    a: MatOverB,
    b: MatOverB,
    c: MatOverB,
    d: MatOverB,
}

const EQUIV_TOL: f64 = 1e-9;

impl GrassPoint {
    pub fn new(
        a: MatOverB,
        b: MatOverB,
        c: MatOverB,
        d: MatOverB,
    ) -> Result<Self, GrassError> {
        let algebra = a.algebra();
        let n = a.level();
        for m in [&b, &c, &d] {
            if m.algebra() != algebra {
                return Err(GrassError::AlgebraMismatch);
            }
            if m.level() != n {
                return Err(GrassError::LevelMismatch(m.level(), n));
            }
        }
        let point = GrassPoint { algebra, n, a, b, c, d };
        if !point.rep().is_invertible() {
            return Err(GrassError::NotInvertible);
        }
        Ok(point)
    }

    /// Split an invertible level-`2n` matrix into the four level-`n` blocks.
    pub fn from_rep(rep: &MatOverB) -> Result<Self, GrassError> {
        let two_n = rep.level();
        if two_n % 2 != 0 {
            return Err(GrassError::Shape(format!(
                "representative level {two_n} is odd"
            )));
        }
        let n = two_n / 2;
        Self::new(
            rep.level_block(0, 0, n, n),
            rep.level_block(0, n, n, n),
            rep.level_block(n, 0, n, n),
            rep.level_block(n, n, n, n),
        )
    }

    pub fn algebra(&self) -> BaseAlgebra {
        self.algebra
    }

    pub fn level(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> (&MatOverB, &MatOverB, &MatOverB, &MatOverB) {
        (&self.a, &self.b, &self.c, &self.d)
    }

    /// The stacked representative `[[a,b],[c,d]]` at level `2n`.
    pub fn rep(&self) -> MatOverB {
        MatOverB::from_level_blocks(&[
            vec![&self.a, &self.b],
            vec![&self.c, &self.d],
        ])
        .expect("blocks share algebra and level")
    }

    /// The affine point `β`, i.e. the class of `((0,1),(-1,β))`.
    pub fn from_affine(beta: &MatOverB) -> Self {
        let algebra = beta.algebra();
        let n = beta.level();
        let id = MatOverB::identity(algebra, n);
        GrassPoint {
            algebra,
            n,
            a: MatOverB::zeros(algebra, n),
            b: id.clone(),
            c: id.neg(),
            d: beta.clone(),
        }
    }

    /// The chart representative `((1,β),(0,1))`. This is a different point
    /// from `from_affine(β)`: its `(b,d)` column is `(β, 1)`.
    pub fn from_affine_chart(beta: &MatOverB) -> Self {
        let algebra = beta.algebra();
        let n = beta.level();
        GrassPoint {
            algebra,
            n,
            a: MatOverB::identity(algebra, n),
            b: beta.clone(),
            c: MatOverB::zeros(algebra, n),
            d: MatOverB::identity(algebra, n),
        }
    }

    /// The graph of an algebra element `y`: the level-1 class of
    /// `((0,1),(1,y))`.
    pub fn graph_of(algebra: BaseAlgebra, y: &ComplexMatrix) -> Result<Self, GrassError> {
        algebra.check_element(y)?;
        let id = MatOverB::identity(algebra, 1);
        Ok(GrassPoint {
            algebra,
            n: 1,
            a: MatOverB::zeros(algebra, 1),
            b: id.clone(),
            c: id,
            d: MatOverB::embed(algebra, 1, &[vec![y.clone()]])?,
        })
    }

    /// The class of `((1,0),(0,1))`, whose `(b,d)` column is `(0,1)`.
    pub fn point_at_infinity(algebra: BaseAlgebra, n: usize) -> Self {
        GrassPoint {
            algebra,
            n,
            a: MatOverB::identity(algebra, n),
            b: MatOverB::zeros(algebra, n),
            c: MatOverB::zeros(algebra, n),
            d: MatOverB::identity(algebra, n),
        }
    }

    /// `d·b⁻¹` when the `b`-column entry is invertible.
    pub fn affine_part(&self) -> Result<MatOverB, GrassError> {
        if !self.b.is_invertible() {
            return Err(GrassError::NotAffine);
        }
        Ok(self.d.mul(&self.b.invert()?)?)
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self, GrassError> {
        if self.algebra != other.algebra {
            return Err(GrassError::AlgebraMismatch);
        }
        Ok(GrassPoint {
            algebra: self.algebra,
            n: self.n + other.n,
            a: self.a.direct_sum(&other.a)?,
            b: self.b.direct_sum(&other.b)?,
            c: self.c.direct_sum(&other.c)?,
            d: self.d.direct_sum(&other.d)?,
        })
    }

    /// The `m`-fold direct sum of `self` with itself, `I_m ⊗` each block.
    pub fn amplify(&self, m: usize) -> Self {
        GrassPoint {
            algebra: self.algebra,
            n: m * self.n,
            a: self.a.amplify(m),
            b: self.b.amplify(m),
            c: self.c.amplify(m),
            d: self.d.amplify(m),
        }
    }

    /// `C(g)` for `g = ((g11,g12),(g21,g22))` with entries in `B`: left
    /// multiplication of the representative rows by the constant blocks.
    pub fn gl2_action(&self, g: &[[ComplexMatrix; 2]; 2]) -> Result<Self, GrassError> {
        let cst = |x: &ComplexMatrix| MatOverB::constant(self.algebra, self.n, x);
        let g11 = cst(&g[0][0])?;
        let g12 = cst(&g[0][1])?;
        let g21 = cst(&g[1][0])?;
        let g22 = cst(&g[1][1])?;
        Self::new(
            g11.mul(&self.a)?.add(&g12.mul(&self.c)?)?,
            g11.mul(&self.b)?.add(&g12.mul(&self.d)?)?,
            g21.mul(&self.a)?.add(&g22.mul(&self.c)?)?,
            g21.mul(&self.b)?.add(&g22.mul(&self.d)?)?,
        )
    }

    /// `C(g)` for a scalar `2×2` matrix `g`.
    pub fn gl2_scalar(&self, g: &ComplexMatrix) -> Result<Self, GrassError> {
        if g.rows() != 2 || g.cols() != 2 {
            return Err(GrassError::Shape(format!(
                "gl2_scalar takes a 2×2 matrix, got {}×{}",
                g.rows(),
                g.cols()
            )));
        }
        let one = self.algebra.identity_element();
        let e = |i: usize, j: usize| one.scale(g.get(i, j));
        self.gl2_action(&[[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }

    /// The `GL(n;C)` action: conjugate every block by `s ⊗ 1`.
    pub fn scalar_action(&self, s: &ComplexMatrix) -> Result<Self, GrassError> {
        if s.rows() != self.n || s.cols() != self.n {
            return Err(GrassError::Shape(format!(
                "scalar_action needs an {}×{} matrix, got {}×{}",
                self.n,
                self.n,
                s.rows(),
                s.cols()
            )));
        }
        let left = MatOverB::scalar_matrix(self.algebra, s);
        let right = MatOverB::scalar_matrix(self.algebra, &s.inverse()?);
        let conj = |x: &MatOverB| left.mul(x)?.mul(&right);
        Self::new(conj(&self.a)?, conj(&self.b)?, conj(&self.c)?, conj(&self.d)?)
    }

    /// The `GL(2n;C)` action: left multiplication of the stacked
    /// representative by `γ ⊗ 1`.
    pub fn big_scalar_action(&self, gamma: &ComplexMatrix) -> Result<Self, GrassError> {
        let two_n = 2 * self.n;
        if gamma.rows() != two_n || gamma.cols() != two_n {
            return Err(GrassError::Shape(format!(
                "big_scalar_action needs a {two_n}×{two_n} matrix, got {}×{}",
                gamma.rows(),
                gamma.cols()
            )));
        }
        let g = MatOverB::scalar_matrix(self.algebra, gamma);
        Self::from_rep(&g.mul(&self.rep())?)
    }

    /// Decision procedure for the quotient: `self ∼ other` iff
    /// `(b₁,d₁)·t = (b₂,d₂)` has an invertible solution `t`. Solved by
    /// least squares on the stacked realization; a residual above
    /// `1e-9·scale` or a singular `t` means inequivalent.
    pub fn equivalent(&self, other: &Self) -> Result<bool, GrassError> {
        if self.algebra != other.algebra {
            return Err(GrassError::AlgebraMismatch);
        }
        if self.n != other.n {
            return Err(GrassError::LevelMismatch(self.n, other.n));
        }
        let stack = |p: &GrassPoint| -> Result<ComplexMatrix, GrassError> {
            let bf = p.b.to_full();
            let df = p.d.to_full();
            Ok(ComplexMatrix::from_blocks(&[vec![&bf], vec![&df]])?)
        };
        let s1 = stack(self)?;
        let s2 = stack(other)?;
        // Normal equations; the Gram matrix is invertible because the
        // representative is, so (b,d) has independent columns.
        let gram = s1.adjoint().multiply(&s1)?;
        let rhs = s1.adjoint().multiply(&s2)?;
        let t = gram.inverse()?.multiply(&rhs)?;
        let residual = s1.multiply(&t)?.max_abs_diff(&s2);
        let scale = f64::max(1.0, s2.max_abs());
        Ok(residual <= EQUIV_TOL * scale && t.is_invertible())
    }

    /// Transversality: the mixed stack `[[b′,b],[d′,d]]` is invertible.
    pub fn transversal(&self, other: &Self) -> Result<bool, GrassError> {
        if self.algebra != other.algebra {
            return Err(GrassError::AlgebraMismatch);
        }
        if self.n != other.n {
            return Err(GrassError::LevelMismatch(self.n, other.n));
        }
        let stacked = MatOverB::from_level_blocks(&[
            vec![&other.b, &self.b],
            vec![&other.d, &self.d],
        ])?;
        Ok(stacked.is_invertible())
    }

    /// `π^⊥ = ((z*,x*),(t*,y*))` where `((x,y),(z,t))` is the inverse of the
    /// representative.
    pub fn orthogonal(&self) -> Self {
        let inv = self.rep().invert().expect("representative is invertible");
        let n = self.n;
        let x = inv.level_block(0, 0, n, n);
        let y = inv.level_block(0, n, n, n);
        let z = inv.level_block(n, 0, n, n);
        let t = inv.level_block(n, n, n, n);
        GrassPoint {
            algebra: self.algebra,
            n,
            a: z.involution(),
            b: x.involution(),
            c: t.involution(),
            d: y.involution(),
        }
    }

    /// `π* = W_n·π^⊥` with `W = ((0,1),(-1,0))`, so the representative is
    /// `((t*,y*),(-z*,-x*))`.
    pub fn star(&self) -> Self {
        let perp = self.orthogonal();
        GrassPoint {
            algebra: self.algebra,
            n: self.n,
            a: perp.c.clone(),
            b: perp.d.clone(),
            c: perp.a.neg(),
            d: perp.b.neg(),
        }
    }
}

/// `s_{p,q} = ((0,I_p),(I_q,0)) ∈ U(p+q)`.
pub fn swap_unitary(p: usize, q: usize) -> ComplexMatrix {
    let n = p + q;
    ComplexMatrix::from_fn(n, n, |i, j| {
        let hit = if i < p { j == q + i } else { j == i - p };
        if hit { cplx(1.0, 0.0) } else { cplx(0.0, 0.0) }
    })
}

/// The scalar `2×2` matrix `((0,1),(1,0))`.
pub fn gl2_swap() -> ComplexMatrix {
    ComplexMatrix::from_fn(2, 2, |i, j| if i != j { cplx(1.0, 0.0) } else { cplx(0.0, 0.0) })
}

/// The Cayley matrix `((-i,i),(1,1))` carrying the unit ball to the upper
/// half-plane.
pub fn cayley_matrix() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[
        vec![cplx(0.0, -1.0), cplx(0.0, 1.0)],
        vec![cplx(1.0, 0.0), cplx(1.0, 0.0)],
    ])
    .expect("static shape")
}

/// `W_n = ((0,I_n),(-I_n,0))`.
pub fn symplectic_w(n: usize) -> ComplexMatrix {
    let mut w = ComplexMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        w.set(i, n + i, cplx(1.0, 0.0));
        w.set(n + i, i, cplx(-1.0, 0.0));
    }
    w
}
