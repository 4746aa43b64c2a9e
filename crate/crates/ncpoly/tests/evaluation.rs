use base_algebra::{dual_basis, BaseAlgebra, MatOverB};
use linalg_core::{cplx, derive_rng, ComplexMatrix};
use ncpoly::NCPoly;
use rand::Rng as _;

fn random_poly(alg: BaseAlgebra, max_deg: usize, terms: usize, seed: u64) -> NCPoly {
    let mut rng = derive_rng(seed, &[alg.k as u64, alg.dim() as u64]);
    let mut p = NCPoly::zero(alg);
    for _ in 0..terms {
        let deg = rng.gen_range(0..=max_deg);
        let word: Vec<usize> = (0..deg).map(|_| rng.gen_range(0..alg.dim())).collect();
        let c = cplx(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        p = p.add(&NCPoly::monomial(alg, word, c).unwrap()).unwrap();
    }
    p
}

#[test]
fn constant_evaluates_to_identity_multiple() {
    let alg = BaseAlgebra::full_matrix(2);
    let c = cplx(2.0, -1.0);
    let p = NCPoly::constant(alg, c);
    let mut rng = derive_rng(1, &[]);
    let beta = MatOverB::random(alg, 3, &mut rng, 1.0);
    let v = p.evaluate(&beta).unwrap();
    assert!(v.max_abs_diff(&ComplexMatrix::scalar(3, c)) == 0.0);
}

#[test]
fn generator_on_kron_input_scales_by_functional_value() {
    for alg in [BaseAlgebra::full_matrix(2), BaseAlgebra::diagonal(3)] {
        let mut rng = derive_rng(2, &[alg.k as u64, alg.dim() as u64]);
        let a = ComplexMatrix::from_fn(3, 3, |i, j| cplx(i as f64 - j as f64, (i * j) as f64));
        let b = alg.random_element(&mut rng, 1.0);
        let beta = MatOverB::from_kron(alg, &a, &b).unwrap();
        for (j, f) in dual_basis(alg).iter().enumerate() {
            let z = NCPoly::generator(alg, j).unwrap();
            let got = z.evaluate(&beta).unwrap();
            let want = a.scale(f.apply(&b));
            assert!(got.max_abs_diff(&want) < 1e-13);
        }
    }
}

#[test]
fn diagonal_algebra_words_multiply_slices() {
    // Over C^k the generator z(φ_j) reads off the j-th slice, so a word
    // evaluates to the corresponding product of slices.
    let alg = BaseAlgebra::diagonal(2);
    let mut rng = derive_rng(3, &[]);
    let beta = MatOverB::random(alg, 3, &mut rng, 1.0);
    let duals = dual_basis(alg);
    let b0 = beta.apply_functional(&duals[0]).unwrap();
    let b1 = beta.apply_functional(&duals[1]).unwrap();
    let word = NCPoly::monomial(alg, vec![0, 1, 0], cplx(1.0, 0.0)).unwrap();
    let got = word.evaluate(&beta).unwrap();
    let want = b0.multiply(&b1).unwrap().multiply(&b0).unwrap();
    assert!(got.max_abs_diff(&want) < 1e-13);
}

#[test]
fn evaluation_is_multiplicative() {
    for alg in [
        BaseAlgebra::full_matrix(2),
        BaseAlgebra::diagonal(2),
        BaseAlgebra::diagonal(3),
    ] {
        let mut rng = derive_rng(4, &[alg.k as u64, alg.dim() as u64]);
        for s in 0..8u64 {
            let p = random_poly(alg, 3, 5, 10 + s);
            let q = random_poly(alg, 3, 5, 20 + s);
            let beta = MatOverB::random(alg, 3, &mut rng, 1.0);
            let lhs = p.try_mul(&q).unwrap().evaluate(&beta).unwrap();
            let rhs = p
                .evaluate(&beta)
                .unwrap()
                .multiply(&q.evaluate(&beta).unwrap())
                .unwrap();
            assert!(lhs.max_abs_diff(&rhs) < 1e-11);
        }
    }
}

#[test]
fn evaluation_respects_direct_sums() {
    for alg in [BaseAlgebra::full_matrix(2), BaseAlgebra::diagonal(2)] {
        let mut rng = derive_rng(5, &[alg.k as u64, alg.dim() as u64]);
        let p = random_poly(alg, 4, 6, 30);
        let b1 = MatOverB::random(alg, 2, &mut rng, 1.0);
        let b2 = MatOverB::random(alg, 3, &mut rng, 1.0);
        let whole = p.evaluate(&b1.direct_sum(&b2).unwrap()).unwrap();
        let part1 = p.evaluate(&b1).unwrap();
        let part2 = p.evaluate(&b2).unwrap();
        assert!(whole.block(0, 0, 2, 2).max_abs_diff(&part1) < 1e-13);
        assert!(whole.block(2, 2, 3, 3).max_abs_diff(&part2) < 1e-13);
        assert!(whole.block(0, 2, 2, 3).max_abs() == 0.0);
        assert!(whole.block(2, 0, 3, 2).max_abs() == 0.0);
    }
}

#[test]
fn evaluation_respects_similarity() {
    for alg in [BaseAlgebra::full_matrix(2), BaseAlgebra::diagonal(3)] {
        let mut rng = derive_rng(6, &[alg.k as u64, alg.dim() as u64]);
        let p = random_poly(alg, 4, 6, 40);
        let beta = MatOverB::random(alg, 3, &mut rng, 1.0);
        let s = ComplexMatrix::from_fn(3, 3, |i, j| {
            cplx(
                if i == j { 2.0 } else { 0.3 * (i as f64 - j as f64) },
                0.1 * (i + j) as f64,
            )
        });
        let s_inv = s.inverse().unwrap();
        let s_b = MatOverB::scalar_matrix(alg, &s);
        let s_inv_b = MatOverB::scalar_matrix(alg, &s_inv);
        let conj = s_b.mul(&beta).unwrap().mul(&s_inv_b).unwrap();
        let lhs = p.evaluate(&conj).unwrap();
        let rhs = s
            .multiply(&p.evaluate(&beta).unwrap())
            .unwrap()
            .multiply(&s_inv)
            .unwrap();
        assert!(lhs.max_abs_diff(&rhs) < 1e-10);
    }
}

#[test]
fn json_round_trip_preserves_terms() {
    let alg = BaseAlgebra::full_matrix(2);
    let p = random_poly(alg, 5, 8, 50);
    let s = p.to_json_string();
    let back = NCPoly::from_json_str(&s).unwrap();
    assert_eq!(p, back);
    // Schema sanity: field names are stable.
    assert!(s.contains("\"algebra\""));
    assert!(s.contains("\"kind\""));
    assert!(s.contains("\"word\""));
    assert!(s.contains("\"re\""));
    assert!(s.contains("\"im\""));
}

#[test]
fn json_rejects_out_of_range_letters() {
    let bad = r#"{"algebra":{"kind":"diagonal","k":2},"terms":[{"word":[5],"re":1.0,"im":0.0}]}"#;
    assert!(NCPoly::from_json_str(bad).is_err());
}
