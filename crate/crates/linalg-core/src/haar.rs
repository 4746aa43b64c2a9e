use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};

use crate::matrix::ComplexMatrix;
use crate::rng::Rng;

/// `n × n` matrix of iid standard complex Gaussians
/// (real and imaginary parts each `N(0, 1/2)`).
pub fn complex_ginibre(n: usize, rng: &mut Rng) -> ComplexMatrix {
    let root_half = 0.5f64.sqrt();
    ComplexMatrix::from_fn(n, n, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex64::new(re * root_half, im * root_half)
    })
}

/// Haar-distributed unitary via QR of a Ginibre matrix with the phase fix
/// `q_j ← q_j · r_jj/|r_jj|`; without the fix the QR convention biases the
/// distribution away from Haar measure.
pub fn haar_unitary(n: usize, rng: &mut Rng) -> ComplexMatrix {
    let g = complex_ginibre(n, rng);
    let qr = g.m.qr();
    let q = qr.q();
    let r = qr.r();
    let mut u = q;
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..n {
            u[(i, j)] *= phase;
        }
    }
    ComplexMatrix::from_dmatrix(u)
}
