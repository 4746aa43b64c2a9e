use base_algebra::{dual_basis, trace_state, BaseAlgebra, MatOverB};
use linalg_core::{cplx, derive_rng, ComplexMatrix};

#[test]
fn matrix_dual_basis_hits_matrix_units() {
    let alg = BaseAlgebra::full_matrix(3);
    let basis = dual_basis(alg);
    assert_eq!(basis.len(), 9);
    // Basis order is (p,q) lexicographic; φ_pq(e_rs) = δ_pr δ_qs.
    for (idx, f) in basis.iter().enumerate() {
        let (p, q) = (idx / 3, idx % 3);
        for r in 0..3 {
            for s in 0..3 {
                let v = f.apply(&ComplexMatrix::matrix_unit(3, r, s));
                let want = if p == r && q == s { 1.0 } else { 0.0 };
                assert!((v - cplx(want, 0.0)).norm() < 1e-15);
            }
        }
        // φ_pq(1) = δ_pq.
        let want = if p == q { 1.0 } else { 0.0 };
        assert!((f.apply_identity() - cplx(want, 0.0)).norm() < 1e-15);
    }
}

#[test]
fn diagonal_dual_basis_reads_coordinates() {
    let alg = BaseAlgebra::diagonal(3);
    let basis = dual_basis(alg);
    assert_eq!(basis.len(), 3);
    let w = ComplexMatrix::diagonal(&[cplx(1.0, 2.0), cplx(-3.0, 0.0), cplx(0.0, 5.0)]);
    for (j, f) in basis.iter().enumerate() {
        assert!((f.apply(&w) - w.get(j, j)).norm() < 1e-15);
        assert!((f.apply_identity() - cplx(1.0, 0.0)).norm() < 1e-15);
    }
}

#[test]
fn dual_and_canonical_bases_are_dual_pairs() {
    for alg in [
        BaseAlgebra::full_matrix(2),
        BaseAlgebra::full_matrix(3),
        BaseAlgebra::diagonal(2),
        BaseAlgebra::diagonal(4),
    ] {
        let duals = dual_basis(alg);
        let elems = alg.canonical_basis();
        assert_eq!(duals.len(), elems.len());
        for (i, f) in duals.iter().enumerate() {
            for (j, b) in elems.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((f.apply(b) - cplx(want, 0.0)).norm() < 1e-15);
            }
        }
    }
}

#[test]
fn functional_star_swaps_matrix_unit_indices() {
    let alg = BaseAlgebra::full_matrix(2);
    let basis = dual_basis(alg);
    // φ_01* = φ_10 (index p*k + q).
    let f01 = &basis[1];
    let f10 = &basis[2];
    assert!(f01.star().dual_matrix().max_abs_diff(f10.dual_matrix()) == 0.0);
    // Defining property: φ*(b) = conj(φ(b*)).
    let mut rng = derive_rng(11, &[0]);
    for f in &basis {
        for _ in 0..4 {
            let b = alg.random_element(&mut rng, 1.0);
            let lhs = f.star().apply(&b);
            let rhs = f.apply(&b.adjoint()).conj();
            assert!((lhs - rhs).norm() < 1e-13);
        }
    }
}

#[test]
fn trace_state_is_unital_and_hermitian() {
    for alg in [BaseAlgebra::full_matrix(3), BaseAlgebra::diagonal(3)] {
        let th = trace_state(alg);
        assert!((th.apply_identity() - cplx(1.0, 0.0)).norm() < 1e-15);
        assert!(th.is_hermitian());
        assert!(th.is_positive(0.0));
        assert!(th.star().dual_matrix().max_abs_diff(th.dual_matrix()) == 0.0);
    }
    let m3 = trace_state(BaseAlgebra::full_matrix(3));
    assert!((m3.apply(&ComplexMatrix::matrix_unit(3, 0, 0)) - cplx(1.0 / 3.0, 0.0)).norm() < 1e-15);
    assert!((m3.apply(&ComplexMatrix::matrix_unit(3, 0, 1))).norm() < 1e-15);
}

#[test]
fn entrywise_application_matches_scalar_values() {
    for alg in [BaseAlgebra::full_matrix(2), BaseAlgebra::diagonal(3)] {
        let mut rng = derive_rng(12, &[alg.k as u64, alg.dim() as u64]);
        let m = MatOverB::random(alg, 3, &mut rng, 1.0);
        for f in dual_basis(alg) {
            let applied = m.apply_functional(&f).unwrap();
            for i in 0..3 {
                for j in 0..3 {
                    let direct = f.apply(&m.extract_entry(i, j).unwrap());
                    assert!((applied.get(i, j) - direct).norm() < 1e-13);
                }
            }
        }
    }
}

#[test]
fn positivity_detects_sign() {
    let alg = BaseAlgebra::full_matrix(2);
    let psd = base_algebra::Functional::new(
        alg,
        ComplexMatrix::from_rows(&[
            vec![cplx(2.0, 0.0), cplx(0.0, 1.0)],
            vec![cplx(0.0, -1.0), cplx(1.0, 0.0)],
        ])
        .unwrap(),
    )
    .unwrap();
    assert!(psd.is_positive(1e-12)); // eigenvalues (3±√5)/2 > 0
    let indef = base_algebra::Functional::new(
        alg,
        ComplexMatrix::diagonal(&[cplx(1.0, 0.0), cplx(-0.5, 0.0)]),
    )
    .unwrap();
    assert!(!indef.is_positive(1e-12));
}
