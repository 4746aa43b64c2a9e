use base_algebra::{BaseAlgebra, MatOverB};
use grassmann::{
    entrywise_tensor, grass_diff_quotient, in_resolvent_set, probe_point, resolvent,
    resolvent_closed_form, resolvent_star_residual, unitary_identities, Embedding, GrassPoint,
    ProbeMode,
};
use linalg_core::{cplx, derive_rng, haar_unitary, ComplexMatrix, Rng};

fn embeddings() -> Vec<Embedding> {
    vec![
        Embedding::new(BaseAlgebra::full_matrix(1), 3).unwrap(),
        Embedding::new(BaseAlgebra::diagonal(2), 2).unwrap(),
        Embedding::new(BaseAlgebra::full_matrix(2), 2).unwrap(),
    ]
}

fn random_pi(emb: &Embedding, rng: &mut Rng) -> GrassPoint {
    let rep = MatOverB::random_invertible(emb.target_algebra(), 2, rng);
    GrassPoint::from_rep(&rep).unwrap()
}

/// A random affine point kept inside the resolvent set of `pi` by rejection.
fn random_sigma(pi: &GrassPoint, emb: &Embedding, n: usize, rng: &mut Rng) -> GrassPoint {
    loop {
        let beta = MatOverB::random(emb.source(), n, rng, 1.0);
        let sigma = GrassPoint::from_affine(&beta);
        if in_resolvent_set(pi, emb, &sigma).unwrap() {
            return sigma;
        }
    }
}

#[test]
fn scalar_graph_value_is_one_half() {
    let alg = BaseAlgebra::full_matrix(1);
    let emb = Embedding::new(alg, 1).unwrap();
    let pi = GrassPoint::graph_of(alg, &ComplexMatrix::zeros(1, 1)).unwrap();
    let two = MatOverB::identity(alg, 1).scale(cplx(2.0, 0.0));
    let sigma = GrassPoint::from_affine(&two);
    let r = resolvent(&pi, &emb, &sigma).unwrap();
    assert_eq!(r.rows(), 1);
    assert!((r.get(0, 0) - cplx(0.5, 0.0)).norm() < 1e-14);
}

#[test]
fn graph_resolvent_is_shifted_inverse() {
    let emb = Embedding::new(BaseAlgebra::full_matrix(1), 3).unwrap();
    let e = emb.target_algebra();
    let mut rng = derive_rng(401, &[]);
    let y = e.random_element(&mut rng, 0.3);
    let pi = GrassPoint::graph_of(e, &y).unwrap();
    let delta = MatOverB::random_invertible(emb.source(), 2, &mut rng);
    let sigma = GrassPoint::from_affine(&delta);
    let r = resolvent(&pi, &emb, &sigma).unwrap();
    let shifted = emb
        .apply_level(&delta)
        .unwrap()
        .sub(&ComplexMatrix::identity(2).kron(&y))
        .unwrap();
    assert!(r.max_abs_diff(&shifted.inverse().unwrap()) < 1e-10);
}

#[test]
fn resolvent_is_representative_independent() {
    for (which, emb) in embeddings().into_iter().enumerate() {
        for trial in 0..4u64 {
            let mut rng = derive_rng(402, &[which as u64, trial]);
            let pi = random_pi(&emb, &mut rng);
            let sigma = random_sigma(&pi, &emb, 2, &mut rng);
            let tau = MatOverB::random_invertible(emb.source(), 2, &mut rng);
            let id = MatOverB::identity(emb.source(), 2);
            let rep2 = sigma.rep().mul(&id.direct_sum(&tau).unwrap()).unwrap();
            let sigma2 = GrassPoint::from_rep(&rep2).unwrap();
            let r1 = resolvent(&pi, &emb, &sigma).unwrap();
            let r2 = resolvent(&pi, &emb, &sigma2).unwrap();
            assert!(r1.max_abs_diff(&r2) <= 1e-10);
        }
    }
}

#[test]
fn closed_form_matches_direct_inversion() {
    for (which, emb) in embeddings().into_iter().enumerate() {
        for trial in 0..4u64 {
            let mut rng = derive_rng(403, &[which as u64, trial]);
            let pi = random_pi(&emb, &mut rng);
            let sigma = random_sigma(&pi, &emb, 2, &mut rng);
            let direct = resolvent(&pi, &emb, &sigma).unwrap();
            let closed = resolvent_closed_form(&pi, &emb, &sigma).unwrap();
            assert!(direct.max_abs_diff(&closed) <= 1e-10);
        }
    }
}

#[test]
fn resolvent_set_is_fully_matricial() {
    let emb = Embedding::new(BaseAlgebra::full_matrix(1), 3).unwrap();
    let mut rng = derive_rng(404, &[]);
    let pi = random_pi(&emb, &mut rng);
    let s1 = random_sigma(&pi, &emb, 2, &mut rng);
    let s2 = random_sigma(&pi, &emb, 1, &mut rng);
    let sum = s1.direct_sum(&s2).unwrap();
    assert!(in_resolvent_set(&pi, &emb, &sum).unwrap());
    let r_sum = resolvent(&pi, &emb, &sum).unwrap();
    let expected = resolvent(&pi, &emb, &s1)
        .unwrap()
        .direct_sum(&resolvent(&pi, &emb, &s2).unwrap());
    assert!(r_sum.max_abs_diff(&expected) <= 1e-9);

    // conjugation by a scalar moves the resolvent by Ad(s ⊗ 1)
    let s = loop {
        let g = linalg_core::complex_ginibre(2, &mut rng);
        if g.is_invertible() {
            break g;
        }
    };
    let moved = s1.scalar_action(&s).unwrap();
    assert!(in_resolvent_set(&pi, &emb, &moved).unwrap());
    let d = emb.target_dim();
    let s_amp = s.kron(&ComplexMatrix::identity(d));
    let expected = s_amp
        .multiply(&resolvent(&pi, &emb, &s1).unwrap())
        .unwrap()
        .multiply(&s.inverse().unwrap().kron(&ComplexMatrix::identity(d)))
        .unwrap();
    assert!(resolvent(&pi, &emb, &moved).unwrap().max_abs_diff(&expected) <= 1e-9);
}

#[test]
fn leaving_the_resolvent_set_is_an_error() {
    let alg = BaseAlgebra::full_matrix(1);
    let emb = Embedding::new(alg, 1).unwrap();
    let pi = GrassPoint::graph_of(alg, &ComplexMatrix::zeros(1, 1)).unwrap();
    let sigma = GrassPoint::from_affine(&MatOverB::zeros(alg, 1));
    assert!(!in_resolvent_set(&pi, &emb, &sigma).unwrap());
    assert!(resolvent(&pi, &emb, &sigma).is_err());
}

#[test]
fn scalar_difference_quotient_is_classical() {
    let alg = BaseAlgebra::full_matrix(1);
    let emb = Embedding::new(alg, 1).unwrap();
    let w = cplx(0.3, 0.1);
    let z1 = cplx(2.0, 0.5);
    let z2 = cplx(-1.0, 0.25);
    let pi = GrassPoint::graph_of(alg, &ComplexMatrix::scalar(1, w)).unwrap();
    let affine = |z: linalg_core::Complex64| {
        GrassPoint::from_affine(&MatOverB::identity(alg, 1).scale(z))
    };
    let q = grass_diff_quotient(
        |p| resolvent(&pi, &emb, p),
        1,
        &affine(z1),
        &affine(z2),
        ProbeMode::Exact,
    )
    .unwrap();
    assert_eq!(q.rows(), 1);
    let expected = -((z1 - w) * (z2 - w)).inv();
    assert!((q.get(0, 0) - expected).norm() < 1e-12);
}

#[test]
fn block_formula_for_the_coupled_probe() {
    let emb = Embedding::new(BaseAlgebra::full_matrix(1), 3).unwrap();
    let d = emb.target_dim();
    let mut rng = derive_rng(405, &[]);
    let pi = random_pi(&emb, &mut rng);
    let s1 = random_sigma(&pi, &emb, 2, &mut rng);
    let s2 = random_sigma(&pi, &emb, 2, &mut rng);
    let t = linalg_core::complex_ginibre(2, &mut rng);
    let probe = probe_point(&s1, &s2, &t, cplx(1.0, 0.0)).unwrap();
    let r = resolvent(&pi, &emb, &probe).unwrap();

    let r1 = resolvent(&pi, &emb, &s1).unwrap();
    let r2 = resolvent(&pi, &emb, &s2).unwrap();
    let m = 2 * d;
    // diagonal corners match the uncoupled resolvents, lower-left vanishes
    assert!(r.block(0, 0, m, m).max_abs_diff(&r1) <= 1e-10);
    assert!(r.block(m, m, m, m).max_abs_diff(&r2) <= 1e-10);
    assert!(r.block(m, 0, m, m).max_abs() <= 1e-10);
    let coupling = r1
        .multiply(&t.kron(&ComplexMatrix::identity(d)))
        .unwrap()
        .multiply(&r2)
        .unwrap()
        .neg();
    assert!(r.block(0, m, m, m).max_abs_diff(&coupling) <= 1e-10);
}

#[test]
fn coupled_entries_multiply() {
    let emb = Embedding::new(BaseAlgebra::diagonal(2), 2).unwrap();
    let d = emb.target_dim();
    let mut rng = derive_rng(406, &[]);
    let pi = random_pi(&emb, &mut rng);
    let s1 = random_sigma(&pi, &emb, 2, &mut rng);
    let s2 = random_sigma(&pi, &emb, 2, &mut rng);
    let r1 = resolvent(&pi, &emb, &s1).unwrap();
    let r2 = resolvent(&pi, &emb, &s2).unwrap();
    let m = 2;
    for j in 0..m {
        for k in 0..m {
            let t = ComplexMatrix::matrix_unit_rect(m, m, j, k);
            let probe = probe_point(&s1, &s2, &t, cplx(1.0, 0.0)).unwrap();
            let r = resolvent(&pi, &emb, &probe).unwrap();
            for i in 0..m {
                for l in 0..m {
                    let got = r.block(i * d, (m + l) * d, d, d).neg();
                    let expected = r1
                        .block(i * d, j * d, d, d)
                        .multiply(&r2.block(k * d, l * d, d, d))
                        .unwrap();
                    assert!(got.max_abs_diff(&expected) <= 1e-10);
                }
            }
        }
    }
}

#[test]
fn resolvent_equation_holds() {
    // ∂ of the resolvent in the coupled direction equals minus the outer
    // product of resolvents, entrywise over the ambient algebra
    for (which, emb) in embeddings().into_iter().enumerate() {
        let d = emb.target_dim();
        for trial in 0..3u64 {
            let mut rng = derive_rng(407, &[which as u64, trial]);
            let pi = random_pi(&emb, &mut rng);
            let s1 = random_sigma(&pi, &emb, 2, &mut rng);
            let s2 = random_sigma(&pi, &emb, 1, &mut rng);
            let lhs = grass_diff_quotient(
                |p| resolvent(&pi, &emb, p),
                d,
                &s1,
                &s2,
                ProbeMode::Exact,
            )
            .unwrap();
            let r1 = resolvent(&pi, &emb, &s1).unwrap();
            let r2 = resolvent(&pi, &emb, &s2).unwrap();
            let rhs = entrywise_tensor(&r1, &r2, d).unwrap().neg();
            assert!(lhs.max_abs_diff(&rhs) <= 1e-9);
        }
    }
}

#[test]
fn exact_and_finite_difference_probes_agree() {
    let emb = Embedding::new(BaseAlgebra::full_matrix(1), 2).unwrap();
    let d = emb.target_dim();
    let mut rng = derive_rng(408, &[]);
    let pi = random_pi(&emb, &mut rng);
    let s1 = random_sigma(&pi, &emb, 2, &mut rng);
    let s2 = random_sigma(&pi, &emb, 2, &mut rng);
    let f = |p: &GrassPoint| resolvent(&pi, &emb, p);
    let exact = grass_diff_quotient(f, d, &s1, &s2, ProbeMode::Exact).unwrap();
    let fd = grass_diff_quotient(f, d, &s1, &s2, ProbeMode::FiniteDifference).unwrap();
    assert!(exact.max_abs_diff(&fd) <= 1e-5);
}

#[test]
fn star_identity_for_hermitian_data() {
    let emb = Embedding::new(BaseAlgebra::full_matrix(1), 3).unwrap();
    let e = emb.target_algebra();
    let mut rng = derive_rng(409, &[]);
    let y = e.random_hermitian_element(&mut rng, 0.4);
    let pi = GrassPoint::graph_of(e, &y).unwrap();
    let b = emb.source();
    let h = b
        .random_hermitian_element(&mut rng, 1.0)
        .add(&b.identity_element().scale(cplx(3.0, 0.0)))
        .unwrap();
    let mut beta = MatOverB::zeros(b, 2);
    beta.set_entry(0, 0, &h).unwrap();
    beta.set_entry(1, 1, &b.identity_element().scale(cplx(-3.0, 0.0))).unwrap();
    let off = b.random_element(&mut rng, 0.5);
    beta.set_entry(0, 1, &off).unwrap();
    beta.set_entry(1, 0, &off.adjoint()).unwrap();
    let sigma = GrassPoint::from_affine(&beta);
    assert!(in_resolvent_set(&pi, &emb, &sigma).unwrap());
    assert!(resolvent_star_residual(&pi, &emb, &sigma).unwrap() <= 1e-10);
    // with both π and σ hermitian the resolvent itself is self-adjoint
    let r = resolvent(&pi, &emb, &sigma).unwrap();
    assert!(r.max_abs_diff(&r.adjoint()) <= 1e-10);
}

#[test]
fn star_identity_on_random_data() {
    let emb = Embedding::new(BaseAlgebra::full_matrix(2), 2).unwrap();
    for trial in 0..6u64 {
        let mut rng = derive_rng(410, &[trial]);
        let pi = random_pi(&emb, &mut rng);
        let sigma = random_sigma(&pi, &emb, 2, &mut rng);
        if !in_resolvent_set(&pi.star(), &emb, &sigma.star()).unwrap() {
            continue;
        }
        assert!(resolvent_star_residual(&pi, &emb, &sigma).unwrap() <= 1e-9);
    }
}

#[test]
fn unitary_identities_scalar_case() {
    let alg = BaseAlgebra::full_matrix(1);
    let emb = Embedding::new(alg, 1).unwrap();
    let u = ComplexMatrix::scalar(1, cplx(1.0, 0.0));
    let sigma = GrassPoint::from_affine(&MatOverB::identity(alg, 1).scale(cplx(2.0, 0.0)));
    let report = unitary_identities(&u, &emb, &sigma).unwrap();
    assert!(report.failures.is_empty());
    assert!(report.residual_a.unwrap() <= 1e-12);
    assert!(report.residual_c.unwrap() <= 1e-12);
}

#[test]
fn unitary_identities_random_unitaries() {
    let emb = Embedding::new(BaseAlgebra::full_matrix(1), 3).unwrap();
    for trial in 0..8u64 {
        let mut rng = derive_rng(411, &[trial]);
        let u = haar_unitary(3, &mut rng);
        let beta = MatOverB::random(emb.source(), 2, &mut rng, 1.0);
        let sigma = GrassPoint::from_affine(&beta);
        let report = unitary_identities(&u, &emb, &sigma).unwrap();
        if !report.failures.is_empty() {
            continue;
        }
        assert!(report.residual_a.unwrap() <= 1e-10);
        assert!(report.residual_c.unwrap() <= 1e-9);
    }
}

#[test]
fn unitary_identities_over_matrix_base() {
    let emb = Embedding::new(BaseAlgebra::full_matrix(2), 2).unwrap();
    let mut hits = 0;
    for trial in 0..10u64 {
        let mut rng = derive_rng(412, &[trial]);
        let u = haar_unitary(4, &mut rng);
        let beta = MatOverB::random(emb.source(), 2, &mut rng, 1.0);
        let report = unitary_identities(&u, &emb, &GrassPoint::from_affine(&beta)).unwrap();
        if report.failures.is_empty() {
            assert!(report.residual_a.unwrap() <= 1e-9);
            assert!(report.residual_c.unwrap() <= 1e-9);
            hits += 1;
        }
    }
    assert!(hits >= 5, "too many membership failures: {hits}");
}
