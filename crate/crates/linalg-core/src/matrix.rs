use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::LinalgError;
use crate::tol;

/// Dense complex matrix, the universal numeric carrier.
///
/// Entries are validated to be finite on construction; no NaN/Inf is admitted
/// past a constructor. Stored column-major internally, addressed as
/// `(row, col)`.
///
/// ```
/// use linalg_core::{ComplexMatrix, cplx};
///
/// let a = ComplexMatrix::identity(2);
/// let b = ComplexMatrix::from_fn(2, 2, |i, j| cplx((i + j) as f64, 0.0));
/// assert_eq!(a.multiply(&b).unwrap().get(1, 0), cplx(1.0, 0.0));
/// ```
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    pub(crate) m: DMatrix<Complex64>,
}

impl ComplexMatrix {
    pub(crate) fn from_dmatrix(m: DMatrix<Complex64>) -> Self {
        ComplexMatrix { m }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            m: DMatrix::zeros(rows, cols),
        }
    }

    pub fn identity(n: usize) -> Self {
        ComplexMatrix {
            m: DMatrix::identity(n, n),
        }
    }

    /// `z`-multiple of the identity.
    pub fn scalar(n: usize, z: Complex64) -> Self {
        ComplexMatrix {
            m: DMatrix::identity(n, n) * z,
        }
    }

    /// Matrix unit `e_{ij}` of the given square size.
    pub fn matrix_unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = DMatrix::zeros(n, n);
        m[(i, j)] = Complex64::new(1.0, 0.0);
        ComplexMatrix { m }
    }

    /// Rectangular matrix unit `e_{ij}` of shape `rows × cols`.
    pub fn matrix_unit_rect(rows: usize, cols: usize, i: usize, j: usize) -> Self {
        let mut m = DMatrix::zeros(rows, cols);
        m[(i, j)] = Complex64::new(1.0, 0.0);
        ComplexMatrix { m }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let m = DMatrix::from_fn(rows, cols, |i, j| f(i, j));
        let out = ComplexMatrix { m };
        out.validate_finite()
            .expect("from_fn produced a non-finite entry");
        out
    }

    /// Build from row-major nested slices; all rows must have equal length.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(LinalgError::RaggedRows);
        }
        let m = DMatrix::from_fn(r, c, |i, j| rows[i][j]);
        let out = ComplexMatrix { m };
        out.validate_finite()?;
        Ok(out)
    }

    pub fn diagonal(entries: &[Complex64]) -> Self {
        let v = DVector::from_column_slice(entries);
        let out = ComplexMatrix {
            m: DMatrix::from_diagonal(&v),
        };
        out.validate_finite().expect("non-finite diagonal entry");
        out
    }

    fn validate_finite(&self) -> Result<(), LinalgError> {
        for j in 0..self.cols() {
            for i in 0..self.rows() {
                let z = self.m[(i, j)];
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(LinalgError::NonFinite(i, j));
                }
            }
        }
        Ok(())
    }

    pub fn rows(&self) -> usize {
        self.m.nrows()
    }

    pub fn cols(&self) -> usize {
        self.m.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.m[(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, z: Complex64) {
        assert!(z.re.is_finite() && z.im.is_finite(), "non-finite entry");
        self.m[(i, j)] = z;
    }

    /// Entries in row-major order.
    pub fn entries_row_major(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                out.push(self.m[(i, j)]);
            }
        }
        out
    }

    pub fn multiply(&self, other: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
        if self.cols() != other.rows() {
            return Err(LinalgError::DimensionMismatch(
                self.rows(),
                self.cols(),
                other.rows(),
                other.cols(),
            ));
        }
        Ok(ComplexMatrix {
            m: &self.m * &other.m,
        })
    }

    pub fn add(&self, other: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
        if self.rows() != other.rows() || self.cols() != other.cols() {
            return Err(LinalgError::DimensionMismatch(
                self.rows(),
                self.cols(),
                other.rows(),
                other.cols(),
            ));
        }
        Ok(ComplexMatrix {
            m: &self.m + &other.m,
        })
    }

    pub fn sub(&self, other: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
        if self.rows() != other.rows() || self.cols() != other.cols() {
            return Err(LinalgError::DimensionMismatch(
                self.rows(),
                self.cols(),
                other.rows(),
                other.cols(),
            ));
        }
        Ok(ComplexMatrix {
            m: &self.m - &other.m,
        })
    }

    pub fn scale(&self, z: Complex64) -> ComplexMatrix {
        ComplexMatrix { m: &self.m * z }
    }

    pub fn neg(&self) -> ComplexMatrix {
        self.scale(Complex64::new(-1.0, 0.0))
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> ComplexMatrix {
        ComplexMatrix {
            m: self.m.adjoint(),
        }
    }

    pub fn transpose(&self) -> ComplexMatrix {
        ComplexMatrix {
            m: self.m.transpose(),
        }
    }

    pub fn conjugate(&self) -> ComplexMatrix {
        ComplexMatrix {
            m: self.m.map(|z| z.conj()),
        }
    }

    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square(), "trace of a non-square matrix");
        self.m.trace()
    }

    /// Frobenius pairing `Tr(self · other*) = Σ_ij self_ij · conj(other_ij)`.
    pub fn frobenius_inner(&self, other: &ComplexMatrix) -> Complex64 {
        assert_eq!(self.rows(), other.rows());
        assert_eq!(self.cols(), other.cols());
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..self.cols() {
            for i in 0..self.rows() {
                acc += self.m[(i, j)] * other.m[(i, j)].conj();
            }
        }
        acc
    }

    /// Kronecker product with the left factor as the outer (block) index:
    /// `(a ⊗ b)[(i,p),(j,q)] = a_ij · b_pq` at row `i·b.rows()+p`.
    pub fn kron(&self, b: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix {
            m: self.m.kronecker(&b.m),
        }
    }

    /// Assemble a matrix from a rectangular grid of blocks. Row heights and
    /// column widths must be consistent across the grid.
    pub fn from_blocks(blocks: &[Vec<&ComplexMatrix>]) -> Result<ComplexMatrix, LinalgError> {
        let bcols = blocks.first().map_or(0, |r| r.len());
        if blocks.iter().any(|r| r.len() != bcols) {
            return Err(LinalgError::RaggedRows);
        }
        let heights: Vec<usize> = blocks.iter().map(|r| r[0].rows()).collect();
        let widths: Vec<usize> = (0..bcols).map(|j| blocks[0][j].cols()).collect();
        for (bi, row) in blocks.iter().enumerate() {
            for (bj, blk) in row.iter().enumerate() {
                if blk.rows() != heights[bi] || blk.cols() != widths[bj] {
                    return Err(LinalgError::DimensionMismatch(
                        blk.rows(),
                        blk.cols(),
                        heights[bi],
                        widths[bj],
                    ));
                }
            }
        }
        let total_r: usize = heights.iter().sum();
        let total_c: usize = widths.iter().sum();
        let mut m = DMatrix::zeros(total_r, total_c);
        let mut roff = 0;
        for (bi, row) in blocks.iter().enumerate() {
            let mut coff = 0;
            for (bj, blk) in row.iter().enumerate() {
                m.view_mut((roff, coff), (heights[bi], widths[bj]))
                    .copy_from(&blk.m);
                coff += widths[bj];
            }
            roff += heights[bi];
        }
        Ok(ComplexMatrix { m })
    }

    /// Copy out the `r × c` block with upper-left corner `(i0, j0)`.
    pub fn block(&self, i0: usize, j0: usize, r: usize, c: usize) -> ComplexMatrix {
        ComplexMatrix {
            m: self.m.view((i0, j0), (r, c)).into_owned(),
        }
    }

    pub fn set_block(&mut self, i0: usize, j0: usize, blk: &ComplexMatrix) {
        self.m
            .view_mut((i0, j0), (blk.rows(), blk.cols()))
            .copy_from(&blk.m);
    }

    pub fn direct_sum(&self, other: &ComplexMatrix) -> ComplexMatrix {
        let z01 = ComplexMatrix::zeros(self.rows(), other.cols());
        let z10 = ComplexMatrix::zeros(other.rows(), self.cols());
        ComplexMatrix::from_blocks(&[vec![self, &z01], vec![&z10, other]])
            .expect("direct sum blocks are consistent by construction")
    }

    pub fn max_abs(&self) -> f64 {
        self.m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!(self.rows(), other.rows());
        assert_eq!(self.cols(), other.cols());
        let mut worst = 0.0f64;
        for j in 0..self.cols() {
            for i in 0..self.rows() {
                worst = worst.max((self.m[(i, j)] - other.m[(i, j)]).norm());
            }
        }
        worst
    }

    pub fn is_close_to(&self, other: &ComplexMatrix, tol: f64) -> bool {
        self.rows() == other.rows()
            && self.cols() == other.cols()
            && self.max_abs_diff(other) <= tol
    }

    /// LU inverse with partial pivoting. A pivot of magnitude below
    /// `tol::SINGULARITY_REL` times the largest entry magnitude is treated as
    /// singular; resolvent-set membership downstream is decided by exactly
    /// this threshold.
    pub fn inverse(&self) -> Result<ComplexMatrix, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare(self.rows(), self.cols()));
        }
        let scale = self.max_abs();
        if scale == 0.0 {
            return Err(LinalgError::Singular);
        }
        let lu = self.m.clone().lu();
        let threshold = tol::SINGULARITY_REL * scale;
        let u_diag = lu.u().diagonal();
        if u_diag.iter().any(|p| p.norm() < threshold) {
            return Err(LinalgError::Singular);
        }
        let inv = lu.try_inverse().ok_or(LinalgError::Singular)?;
        let out = ComplexMatrix { m: inv };
        out.validate_finite()?;
        Ok(out)
    }

    /// True when [`inverse`](Self::inverse) would succeed.
    pub fn is_invertible(&self) -> bool {
        if !self.is_square() || self.rows() == 0 {
            return false;
        }
        let scale = self.max_abs();
        if scale == 0.0 {
            return false;
        }
        let lu = self.m.clone().lu();
        let threshold = tol::SINGULARITY_REL * scale;
        lu.u().diagonal().iter().all(|p| p.norm() >= threshold)
    }

    /// Largest singular value, computed as the square root of the top
    /// eigenvalue of the Hermitian PSD matrix `A*A`.
    pub fn spectral_norm(&self) -> f64 {
        if self.rows() == 0 || self.cols() == 0 {
            return 0.0;
        }
        // Working on A*A squares the condition but keeps one code path for
        // rectangular inputs; accuracy is ~1e-10 relative, enough for the
        // norm thresholds used downstream.
        let scale = self.max_abs();
        if scale == 0.0 {
            return 0.0;
        }
        let scaled = &self.m / Complex64::new(scale, 0.0);
        let gram = scaled.adjoint() * &scaled;
        let eigs = hermitian_eigenvalues_raw(&gram);
        let top = eigs.iter().cloned().fold(0.0f64, f64::max).max(0.0);
        scale * top.sqrt()
    }

    /// Eigenvalues of a Hermitian matrix, ascending. Fails with
    /// `NotHermitian` when the asymmetry exceeds `tol::HERMITIAN_REL`
    /// relative to the largest entry.
    pub fn hermitian_eigenvalues(&self) -> Result<Vec<f64>, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare(self.rows(), self.cols()));
        }
        let asym = self.max_abs_diff(&self.adjoint());
        let scale = self.max_abs().max(1.0);
        if asym > tol::HERMITIAN_REL * scale {
            return Err(LinalgError::NotHermitian(asym));
        }
        // Hermitize so roundoff in the input cannot leak complex parts into
        // the eigensolver.
        let h = (&self.m + self.m.adjoint()) * Complex64::new(0.5, 0.0);
        let mut eigs = hermitian_eigenvalues_raw(&h);
        eigs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(eigs)
    }

    pub fn hermitian_min_eigenvalue(&self) -> Result<f64, LinalgError> {
        Ok(self.hermitian_eigenvalues()?[0])
    }
}

fn hermitian_eigenvalues_raw(h: &DMatrix<Complex64>) -> Vec<f64> {
    let se = nalgebra::SymmetricEigen::new(h.clone());
    se.eigenvalues.iter().cloned().collect()
}

impl std::ops::Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix::add(self, rhs).expect("matrix addition dimension mismatch")
    }
}

impl std::ops::Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix::sub(self, rhs).expect("matrix subtraction dimension mismatch")
    }
}

impl std::ops::Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix::multiply(self, rhs).expect("matrix product dimension mismatch")
    }
}
