//! Dense complex linear algebra kernel.
//!
//! Everything downstream (matrix algebras over a base C*-algebra, Grassmannian
//! resolvents, Monte Carlo over unitary groups) reduces to operations on one
//! carrier type, [`ComplexMatrix`]: products, block assembly, LU inversion,
//! spectral norms, Hermitian eigenvalues and Haar-unitary sampling.
//!
//! All values are immutable after construction and safe to share across
//! threads. The only stateful object is the RNG; parallel consumers derive
//! independent streams with [`derive_rng`] instead of sharing one.

mod error;
mod haar;
mod matrix;
mod rng;
pub mod tol;

pub use error::LinalgError;
pub use haar::{complex_ginibre, haar_unitary};
pub use matrix::ComplexMatrix;
pub use num_complex::Complex64;
pub use rng::{derive_rng, Rng};

/// Shorthand constructor for a complex scalar.
pub fn cplx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}
