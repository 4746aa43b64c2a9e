use linalg_core::{Complex64, ComplexMatrix, Rng};

use crate::algebra::{AlgebraKind, BaseAlgebra};
use crate::error::BaseError;
use crate::functional::Functional;

/// Level-`n` matrix over the base algebra.
///
/// Full kind: one `nk × nk` complex matrix in Kronecker order with the level
/// as the outer index, so the algebra entry `(i,j)` is the `k × k` block at
/// `(i·k, j·k)`. Diagonal kind: `k` independent `n × n` slices, slice `t`
/// holding the `t`-th coordinate of every entry.
#[derive(Clone, Debug, PartialEq)]
pub struct MatOverB {
    algebra: BaseAlgebra,
    n: usize,
    data: MatData,
}

#[derive(Clone, Debug, PartialEq)]
enum MatData {
    Full(ComplexMatrix),
    Diag(Vec<ComplexMatrix>),
}

impl MatOverB {
    pub fn algebra(&self) -> BaseAlgebra {
        self.algebra
    }

    /// Matricial level `n`.
    pub fn level(&self) -> usize {
        self.n
    }

    pub fn zeros(algebra: BaseAlgebra, n: usize) -> Self {
        let data = match algebra.kind {
            AlgebraKind::FullMatrix => MatData::Full(ComplexMatrix::zeros(n * algebra.k, n * algebra.k)),
            AlgebraKind::Diagonal => {
                MatData::Diag((0..algebra.k).map(|_| ComplexMatrix::zeros(n, n)).collect())
            }
        };
        MatOverB { algebra, n, data }
    }

    pub fn identity(algebra: BaseAlgebra, n: usize) -> Self {
        let data = match algebra.kind {
            AlgebraKind::FullMatrix => MatData::Full(ComplexMatrix::identity(n * algebra.k)),
            AlgebraKind::Diagonal => {
                MatData::Diag((0..algebra.k).map(|_| ComplexMatrix::identity(n)).collect())
            }
        };
        MatOverB { algebra, n, data }
    }

    /// Build from an `n × n` array of algebra elements.
    pub fn embed(
        algebra: BaseAlgebra,
        n: usize,
        entries: &[Vec<ComplexMatrix>],
    ) -> Result<Self, BaseError> {
        if entries.len() != n || entries.iter().any(|row| row.len() != n) {
            return Err(BaseError::LevelMismatch(entries.len(), n));
        }
        for row in entries {
            for b in row {
                algebra.check_element(b)?;
            }
        }
        let k = algebra.k;
        let data = match algebra.kind {
            AlgebraKind::FullMatrix => {
                let mut m = ComplexMatrix::zeros(n * k, n * k);
                for (i, row) in entries.iter().enumerate() {
                    for (j, b) in row.iter().enumerate() {
                        m.set_block(i * k, j * k, b);
                    }
                }
                MatData::Full(m)
            }
            AlgebraKind::Diagonal => {
                let slices = (0..k)
                    .map(|t| ComplexMatrix::from_fn(n, n, |i, j| entries[i][j].get(t, t)))
                    .collect();
                MatData::Diag(slices)
            }
        };
        Ok(MatOverB { algebra, n, data })
    }

    /// The algebra element at entry `(i, j)`, as a `k × k` matrix.
    pub fn extract_entry(&self, i: usize, j: usize) -> Result<ComplexMatrix, BaseError> {
        if i >= self.n || j >= self.n {
            return Err(BaseError::IndexOutOfRange(i, j, self.n));
        }
        let k = self.algebra.k;
        Ok(match &self.data {
            MatData::Full(m) => m.block(i * k, j * k, k, k),
            MatData::Diag(slices) => {
                let d: Vec<Complex64> = slices.iter().map(|s| s.get(i, j)).collect();
                ComplexMatrix::diagonal(&d)
            }
        })
    }

    pub fn set_entry(&mut self, i: usize, j: usize, b: &ComplexMatrix) -> Result<(), BaseError> {
        if i >= self.n || j >= self.n {
            return Err(BaseError::IndexOutOfRange(i, j, self.n));
        }
        self.algebra.check_element(b)?;
        let k = self.algebra.k;
        match &mut self.data {
            MatData::Full(m) => m.set_block(i * k, j * k, b),
            MatData::Diag(slices) => {
                for (t, s) in slices.iter_mut().enumerate() {
                    s.set(i, j, b.get(t, t));
                }
            }
        }
        Ok(())
    }

    /// `A ⊗ b` for a scalar `n × n` matrix `A` and algebra element `b`.
    pub fn from_kron(
        algebra: BaseAlgebra,
        a: &ComplexMatrix,
        b: &ComplexMatrix,
    ) -> Result<Self, BaseError> {
        if !a.is_square() {
            return Err(LevelShapeErr(a).into());
        }
        algebra.check_element(b)?;
        let n = a.rows();
        let data = match algebra.kind {
            AlgebraKind::FullMatrix => MatData::Full(a.kron(b)),
            AlgebraKind::Diagonal => MatData::Diag(
                (0..algebra.k).map(|t| a.scale(b.get(t, t))).collect(),
            ),
        };
        Ok(MatOverB { algebra, n, data })
    }

    /// `A ⊗ 1_B`: a scalar matrix viewed over the algebra.
    pub fn scalar_matrix(algebra: BaseAlgebra, a: &ComplexMatrix) -> Self {
        Self::from_kron(algebra, a, &algebra.identity_element())
            .expect("identity element is always valid")
    }

    /// `I_n ⊗ b`: a constant algebra element at level `n`.
    pub fn constant(algebra: BaseAlgebra, n: usize, b: &ComplexMatrix) -> Result<Self, BaseError> {
        Self::from_kron(algebra, &ComplexMatrix::identity(n), b)
    }

    fn check_same_shape(&self, other: &Self) -> Result<(), BaseError> {
        if self.algebra != other.algebra {
            return Err(BaseError::AlgebraMismatch);
        }
        if self.n != other.n {
            return Err(BaseError::LevelMismatch(self.n, other.n));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, BaseError> {
        self.check_same_shape(other)?;
        let data = match (&self.data, &other.data) {
            (MatData::Full(a), MatData::Full(b)) => MatData::Full(a.add(b)?),
            (MatData::Diag(a), MatData::Diag(b)) => MatData::Diag(
                a.iter()
                    .zip(b.iter())
                    .map(|(x, y)| x.add(y))
                    .collect::<Result<_, _>>()?,
            ),
            _ => return Err(BaseError::AlgebraMismatch),
        };
        Ok(MatOverB {
            algebra: self.algebra,
            n: self.n,
            data,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, BaseError> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self, BaseError> {
        self.check_same_shape(other)?;
        let data = match (&self.data, &other.data) {
            (MatData::Full(a), MatData::Full(b)) => MatData::Full(a.multiply(b)?),
            (MatData::Diag(a), MatData::Diag(b)) => MatData::Diag(
                a.iter()
                    .zip(b.iter())
                    .map(|(x, y)| x.multiply(y))
                    .collect::<Result<_, _>>()?,
            ),
            _ => return Err(BaseError::AlgebraMismatch),
        };
        Ok(MatOverB {
            algebra: self.algebra,
            n: self.n,
            data,
        })
    }

    pub fn scale(&self, z: Complex64) -> Self {
        self.map(|m| m.scale(z))
    }

    pub fn neg(&self) -> Self {
        self.scale(Complex64::new(-1.0, 0.0))
    }

    /// Conjugate-transpose in the realization.
    pub fn involution(&self) -> Self {
        self.map(ComplexMatrix::adjoint)
    }

    fn map(&self, f: impl Fn(&ComplexMatrix) -> ComplexMatrix) -> Self {
        let data = match &self.data {
            MatData::Full(m) => MatData::Full(f(m)),
            MatData::Diag(slices) => MatData::Diag(slices.iter().map(f).collect()),
        };
        MatOverB {
            algebra: self.algebra,
            n: self.n,
            data,
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self, BaseError> {
        if self.algebra != other.algebra {
            return Err(BaseError::AlgebraMismatch);
        }
        let data = match (&self.data, &other.data) {
            (MatData::Full(a), MatData::Full(b)) => MatData::Full(a.direct_sum(b)),
            (MatData::Diag(a), MatData::Diag(b)) => MatData::Diag(
                a.iter()
                    .zip(b.iter())
                    .map(|(x, y)| x.direct_sum(y))
                    .collect(),
            ),
            _ => return Err(BaseError::AlgebraMismatch),
        };
        Ok(MatOverB {
            algebra: self.algebra,
            n: self.n + other.n,
            data,
        })
    }

    /// `I_m ⊗ self`, the m-fold inflation to level `m·n`.
    pub fn amplify(&self, m: usize) -> Self {
        let im = ComplexMatrix::identity(m);
        let out = self.map(|mat| im.kron(mat));
        MatOverB {
            algebra: self.algebra,
            n: m * self.n,
            data: out.data,
        }
    }

    pub fn invert(&self) -> Result<Self, BaseError> {
        let data = match &self.data {
            MatData::Full(m) => MatData::Full(m.inverse()?),
            MatData::Diag(slices) => MatData::Diag(
                slices
                    .iter()
                    .map(|s| s.inverse())
                    .collect::<Result<_, _>>()?,
            ),
        };
        Ok(MatOverB {
            algebra: self.algebra,
            n: self.n,
            data,
        })
    }

    pub fn is_invertible(&self) -> bool {
        match &self.data {
            MatData::Full(m) => m.is_invertible(),
            MatData::Diag(slices) => slices.iter().all(ComplexMatrix::is_invertible),
        }
    }

    /// Operator (spectral) norm of the realization.
    pub fn norm(&self) -> f64 {
        match &self.data {
            MatData::Full(m) => m.spectral_norm(),
            MatData::Diag(slices) => slices
                .iter()
                .map(ComplexMatrix::spectral_norm)
                .fold(0.0, f64::max),
        }
    }

    pub fn max_abs(&self) -> f64 {
        match &self.data {
            MatData::Full(m) => m.max_abs(),
            MatData::Diag(slices) => slices.iter().map(ComplexMatrix::max_abs).fold(0.0, f64::max),
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.algebra, other.algebra, "algebra mismatch");
        assert_eq!(self.n, other.n, "level mismatch");
        match (&self.data, &other.data) {
            (MatData::Full(a), MatData::Full(b)) => a.max_abs_diff(b),
            (MatData::Diag(a), MatData::Diag(b)) => a
                .iter()
                .zip(b.iter())
                .map(|(x, y)| x.max_abs_diff(y))
                .fold(0.0, f64::max),
            _ => unreachable!("algebra equality fixes the representation"),
        }
    }

    pub fn is_close_to(&self, other: &Self, tol: f64) -> bool {
        self.algebra == other.algebra && self.n == other.n && self.max_abs_diff(other) <= tol
    }

    /// Random element; entries are uniform in the centered square of the
    /// given half-width.
    pub fn random(algebra: BaseAlgebra, n: usize, rng: &mut Rng, scale: f64) -> Self {
        let mut entries = Vec::with_capacity(n);
        for _ in 0..n {
            let row: Vec<ComplexMatrix> = (0..n)
                .map(|_| algebra.random_element(rng, scale))
                .collect();
            entries.push(row);
        }
        Self::embed(algebra, n, &entries).expect("random entries are valid")
    }

    pub fn random_invertible(algebra: BaseAlgebra, n: usize, rng: &mut Rng) -> Self {
        for _ in 0..32 {
            let x = Self::random(algebra, n, rng, 1.0);
            if x.is_invertible() {
                return x;
            }
        }
        unreachable!("random matrices are almost surely invertible")
    }

    /// Assemble from a grid of blocks over the same algebra; block `(i,j)`
    /// must sit at a level consistent with its row and column.
    pub fn from_level_blocks(blocks: &[Vec<&MatOverB>]) -> Result<Self, BaseError> {
        let algebra = blocks
            .first()
            .and_then(|r| r.first())
            .map(|b| b.algebra)
            .expect("nonempty block grid");
        for row in blocks {
            for b in row {
                if b.algebra != algebra {
                    return Err(BaseError::AlgebraMismatch);
                }
            }
        }
        let k = algebra.k;
        let data = match algebra.kind {
            AlgebraKind::FullMatrix => {
                let grid: Vec<Vec<&ComplexMatrix>> = blocks
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|b| match &b.data {
                                MatData::Full(m) => m,
                                MatData::Diag(_) => unreachable!(),
                            })
                            .collect()
                    })
                    .collect();
                MatData::Full(ComplexMatrix::from_blocks(&grid)?)
            }
            AlgebraKind::Diagonal => {
                let mut slices = Vec::with_capacity(k);
                for t in 0..k {
                    let grid: Vec<Vec<&ComplexMatrix>> = blocks
                        .iter()
                        .map(|row| {
                            row.iter()
                                .map(|b| match &b.data {
                                    MatData::Diag(s) => &s[t],
                                    MatData::Full(_) => unreachable!(),
                                })
                                .collect()
                        })
                        .collect();
                    slices.push(ComplexMatrix::from_blocks(&grid)?);
                }
                MatData::Diag(slices)
            }
        };
        let n = blocks.iter().map(|row| row[0].n).sum();
        Ok(MatOverB { algebra, n, data })
    }

    /// Copy out the level-granularity sub-block of `r × c` algebra entries
    /// with upper-left entry `(i0, j0)`.
    pub fn level_block(&self, i0: usize, j0: usize, r: usize, c: usize) -> Self {
        let k = self.algebra.k;
        assert!(i0 + r <= self.n && j0 + c <= self.n, "block out of range");
        let data = match &self.data {
            MatData::Full(m) => MatData::Full(m.block(i0 * k, j0 * k, r * k, c * k)),
            MatData::Diag(slices) => {
                MatData::Diag(slices.iter().map(|s| s.block(i0, j0, r, c)).collect())
            }
        };
        // A non-square block is only used transiently via from_level_blocks;
        // record the row count as the level.
        assert_eq!(r, c, "level blocks must stay square");
        MatOverB {
            algebra: self.algebra,
            n: r,
            data,
        }
    }

    /// Apply a functional entrywise, producing the scalar `n × n` matrix
    /// `(φ(β_ij))_ij`.
    pub fn apply_functional(&self, f: &Functional) -> Result<ComplexMatrix, BaseError> {
        if f.algebra() != self.algebra {
            return Err(BaseError::AlgebraMismatch);
        }
        let k = self.algebra.k;
        Ok(match &self.data {
            MatData::Full(m) => ComplexMatrix::from_fn(self.n, self.n, |i, j| {
                let mut acc = Complex64::new(0.0, 0.0);
                for p in 0..k {
                    for q in 0..k {
                        acc += m.get(i * k + p, j * k + q) * f.dual_matrix().get(p, q);
                    }
                }
                acc
            }),
            MatData::Diag(slices) => {
                let mut out = ComplexMatrix::zeros(self.n, self.n);
                for (t, s) in slices.iter().enumerate() {
                    out = out.add(&s.scale(f.dual_matrix().get(t, t))).unwrap();
                }
                out
            }
        })
    }

    /// The `nk × nk` complex realization (block-diagonal entries for the
    /// diagonal kind). Cross-check and report plumbing; arithmetic stays in
    /// the native representation.
    pub fn to_full(&self) -> ComplexMatrix {
        let k = self.algebra.k;
        match &self.data {
            MatData::Full(m) => m.clone(),
            MatData::Diag(slices) => ComplexMatrix::from_fn(self.n * k, self.n * k, |r, c| {
                let (i, p) = (r / k, r % k);
                let (j, q) = (c / k, c % k);
                if p == q {
                    slices[p].get(i, j)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }),
        }
    }
}

struct LevelShapeErr<'a>(&'a ComplexMatrix);

impl From<LevelShapeErr<'_>> for BaseError {
    fn from(e: LevelShapeErr<'_>) -> Self {
        BaseError::Linalg(linalg_core::LinalgError::NotSquare(e.0.rows(), e.0.cols()))
    }
}

impl std::ops::Add for &MatOverB {
    type Output = MatOverB;
    fn add(self, rhs: &MatOverB) -> MatOverB {
        MatOverB::add(self, rhs).expect("matrix addition shape mismatch")
    }
}

impl std::ops::Sub for &MatOverB {
    type Output = MatOverB;
    fn sub(self, rhs: &MatOverB) -> MatOverB {
        MatOverB::sub(self, rhs).expect("matrix subtraction shape mismatch")
    }
}

impl std::ops::Mul for &MatOverB {
    type Output = MatOverB;
    fn mul(self, rhs: &MatOverB) -> MatOverB {
        MatOverB::mul(self, rhs).expect("matrix product shape mismatch")
    }
}
