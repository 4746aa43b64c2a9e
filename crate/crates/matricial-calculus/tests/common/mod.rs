#![allow(dead_code)]

use base_algebra::BaseAlgebra;
use linalg_core::{Complex64, Rng};
use ncpoly::NCPoly;
use rand::Rng as _;

pub fn scalars() -> BaseAlgebra {
    BaseAlgebra::full_matrix(1)
}

pub fn random_coeff(rng: &mut Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Random polynomial with `terms` monomials of degree between `min_degree`
/// and `max_degree`.
pub fn random_poly(
    algebra: BaseAlgebra,
    min_degree: usize,
    max_degree: usize,
    terms: usize,
    rng: &mut Rng,
) -> NCPoly {
    let d = algebra.dim();
    let mut p = NCPoly::zero(algebra);
    for _ in 0..terms {
        let len = rng.gen_range(min_degree..=max_degree);
        let word: Vec<usize> = (0..len).map(|_| rng.gen_range(0..d)).collect();
        let m = NCPoly::monomial(algebra, word, random_coeff(rng)).unwrap();
        p = p.add(&m).unwrap();
    }
    p
}
