use base_algebra::{BaseAlgebra, MatOverB};
use freeprob::{
    free_sum_moments, r_transform, r_transform_series, ExpectationKind, ExpectationSetup,
    MomentFamily,
};
use linalg_core::{cplx, derive_rng, Complex64, ComplexMatrix};

fn catalan(n: usize) -> f64 {
    let mut c = 1.0f64;
    for i in 0..n {
        c = c * 2.0 * (2.0 * i as f64 + 1.0) / (i as f64 + 2.0);
    }
    c
}

/// φ(a), φ(a²), … for the standard semicircle: odd moments vanish, even
/// moments are Catalan numbers.
fn semicircle_moments(orders: usize) -> Vec<Complex64> {
    (1..=orders)
        .map(|j| {
            if j % 2 == 0 {
                cplx(catalan(j / 2), 0.0)
            } else {
                cplx(0.0, 0.0)
            }
        })
        .collect()
}

fn point_mass_moments(lambda: Complex64, orders: usize) -> Vec<Complex64> {
    (1..=orders).map(|j| lambda.powu(j as u32)).collect()
}

#[test]
fn semicircle_series_has_only_a_quadratic_term() {
    let fam = MomentFamily::from_scalar_moments(&semicircle_moments(8));
    let r = r_transform_series(&fam, 6).unwrap();
    // coefficient of degree 1 is 1, everything else vanishes
    for m in 0..=6usize {
        let want = if m == 1 { 1.0 } else { 0.0 };
        let got = r.get(m, 0, &vec![0; m]);
        assert!(
            (got - cplx(want, 0.0)).norm() < 1e-11,
            "degree {m}: {got} vs {want}"
        );
    }
}

#[test]
fn point_mass_series_is_its_constant() {
    let lambda = cplx(0.5, 0.2);
    let fam = MomentFamily::from_scalar_moments(&point_mass_moments(lambda, 8));
    let r = r_transform_series(&fam, 6).unwrap();
    assert!((r.get(0, 0, &[]) - lambda).norm() < 1e-12);
    for m in 1..=6usize {
        assert!(
            r.get(m, 0, &vec![0; m]).norm() < 1e-10,
            "degree {m} should cancel"
        );
    }
}

#[test]
fn series_and_newton_map_agree() {
    // scalar base over a random ambient element
    let base = BaseAlgebra::full_matrix(1);
    let mut rng = derive_rng(31, &[]);
    let g = linalg_core::complex_ginibre(3, &mut rng);
    let a = g.add(&g.adjoint()).unwrap().scale(cplx(0.4, 0.0));
    let setup = ExpectationSetup::new(base, 3, ExpectationKind::VectorSlot(0), a).unwrap();
    let moments = MomentFamily::from_setup(&setup, 7).unwrap();
    let series = r_transform_series(&moments, 6).unwrap();
    for &b in &[cplx(0.02, 0.0), cplx(-0.01, 0.015)] {
        let point = MatOverB::constant(base, 1, &ComplexMatrix::scalar(1, b)).unwrap();
        let via_series = series.evaluate_b(base, &point).unwrap().to_full();
        let via_newton = r_transform(&setup, &ComplexMatrix::scalar(1, b)).unwrap();
        assert!(
            via_series.max_abs_diff(&via_newton) < 1e-8,
            "series/Newton gap {}",
            via_series.max_abs_diff(&via_newton)
        );
    }

    // matrix base
    let base = BaseAlgebra::full_matrix(2);
    let g = linalg_core::complex_ginibre(4, &mut rng);
    let a = g.add(&g.adjoint()).unwrap().scale(cplx(0.3, 0.0));
    let setup = ExpectationSetup::new(base, 2, ExpectationKind::PartialTrace, a).unwrap();
    let moments = MomentFamily::from_setup(&setup, 6).unwrap();
    let series = r_transform_series(&moments, 5).unwrap();
    let b = base.random_element(&mut rng, 0.015);
    let point = MatOverB::constant(base, 1, &b).unwrap();
    let via_series = series.evaluate_b(base, &point).unwrap().to_full();
    let via_newton = r_transform(&setup, &b).unwrap();
    assert!(
        via_series.max_abs_diff(&via_newton) < 1e-8,
        "matrix-base series/Newton gap {}",
        via_series.max_abs_diff(&via_newton)
    );
}

#[test]
fn free_sum_of_semicircles_rescales_the_catalan_moments() {
    // classical fact: adding two free standard semicircles doubles the
    // variance, so the 2j-th moment becomes 2^j · Catalan(j)
    let fam = MomentFamily::from_scalar_moments(&semicircle_moments(6));
    let sum = free_sum_moments(&fam, &fam, 6).unwrap();
    for j in 1..=6usize {
        let want = if j % 2 == 0 {
            cplx(2f64.powi((j / 2) as i32) * catalan(j / 2), 0.0)
        } else {
            cplx(0.0, 0.0)
        };
        let got = sum.tensor_entry(j - 1, &vec![0; j - 1]).get(0, 0);
        assert!(
            (got - want).norm() < 1e-12,
            "moment {j}: {got} vs {want}"
        );
    }
}

#[test]
fn r_series_is_additive_under_free_summation() {
    // scalar case at degree 5
    let m1 = MomentFamily::from_scalar_moments(&semicircle_moments(7));
    let m2 = MomentFamily::from_scalar_moments(&point_mass_moments(cplx(0.5, 0.0), 7));
    let sum = free_sum_moments(&m1, &m2, 7).unwrap();
    let r1 = r_transform_series(&m1, 5).unwrap();
    let r2 = r_transform_series(&m2, 5).unwrap();
    let r12 = r_transform_series(&sum, 5).unwrap();
    for m in 0..=5usize {
        let got = r12.get(m, 0, &vec![0; m]);
        let want = r1.get(m, 0, &vec![0; m]) + r2.get(m, 0, &vec![0; m]);
        assert!(
            (got - want).norm() < 1e-9,
            "scalar degree {m}: {got} vs {want}"
        );
    }

    // matrix base with generic families
    let alg = BaseAlgebra::full_matrix(2);
    let mut rng = derive_rng(33, &[]);
    let m1 = MomentFamily::random(alg, 5, &mut rng, 0.5);
    let m2 = MomentFamily::random(alg, 5, &mut rng, 0.5);
    let sum = free_sum_moments(&m1, &m2, 5).unwrap();
    let r1 = r_transform_series(&m1, 4).unwrap();
    let r2 = r_transform_series(&m2, 4).unwrap();
    let r12 = r_transform_series(&sum, 4).unwrap();
    let d = alg.dim();
    for m in 0..=4usize {
        for t in 0..d.pow(m as u32) {
            let mut tuple = vec![0usize; m];
            let mut idx = t;
            for slot in tuple.iter_mut().rev() {
                *slot = idx % d;
                idx /= d;
            }
            for o in 0..d {
                let got = r12.get(m, o, &tuple);
                let want = r1.get(m, o, &tuple) + r2.get(m, o, &tuple);
                assert!(
                    (got - want).norm() < 1e-9,
                    "matrix degree {m} tuple {tuple:?} out {o}: {got} vs {want}"
                );
            }
        }
    }
}

#[test]
fn scalar_lifts_reproduce_the_scalar_series() {
    let alg = BaseAlgebra::full_matrix(2);
    let moments = semicircle_moments(6);
    let scalar_fam = MomentFamily::from_scalar_moments(&moments);
    let lifted = MomentFamily::scalar_lift(alg, &moments);
    let r_scalar = r_transform_series(&scalar_fam, 4).unwrap();
    let r_lift = r_transform_series(&lifted, 4).unwrap();
    let basis = alg.canonical_basis();
    let d = alg.dim();
    for m in 0..=4usize {
        for t in 0..d.pow(m as u32) {
            let mut tuple = vec![0usize; m];
            let mut idx = t;
            for slot in tuple.iter_mut().rev() {
                *slot = idx % d;
                idx /= d;
            }
            let mut prod = alg.identity_element();
            for &s in &tuple {
                prod = prod.multiply(&basis[s]).unwrap();
            }
            let want = prod.scale(r_scalar.get(m, 0, &vec![0; m]));
            let got = ComplexMatrix::from_fn(2, 2, |i, j| {
                // reassemble the base element from its output coordinates
                let mut acc = cplx(0.0, 0.0);
                for (o, g) in basis.iter().enumerate() {
                    acc += r_lift.get(m, o, &tuple) * g.get(i, j);
                }
                acc
            });
            assert!(
                got.max_abs_diff(&want) < 1e-10,
                "lift mismatch at degree {m} tuple {tuple:?}"
            );
        }
    }
}

#[test]
fn moment_families_from_setups_match_direct_products() {
    let base = BaseAlgebra::full_matrix(2);
    let mut rng = derive_rng(34, &[]);
    let g = linalg_core::complex_ginibre(4, &mut rng);
    let a = g.add(&g.adjoint()).unwrap().scale(cplx(0.5, 0.0));
    let setup = ExpectationSetup::new(base, 2, ExpectationKind::PartialTrace, a.clone()).unwrap();
    let fam = MomentFamily::from_setup(&setup, 3).unwrap();
    // j = 0: Φ(a)
    assert!(fam.tensor_entry(0, &[]).max_abs_diff(&setup.expect(&a).unwrap()) < 1e-14);
    // j = 2 at a random pair of base elements, against an explicit product
    let b1 = base.random_element(&mut rng, 1.0);
    let b2 = base.random_element(&mut rng, 1.0);
    let direct = setup
        .expect(
            &a.multiply(&setup.embed(&b1).unwrap())
                .unwrap()
                .multiply(&a)
                .unwrap()
                .multiply(&setup.embed(&b2).unwrap())
                .unwrap()
                .multiply(&a)
                .unwrap(),
        )
        .unwrap();
    let via_family = fam.eval(&[&b1, &b2]).unwrap();
    assert!(via_family.max_abs_diff(&direct) < 1e-12);
}

#[test]
fn shape_errors_are_reported() {
    let m1 = MomentFamily::from_scalar_moments(&semicircle_moments(3));
    let m2 = MomentFamily::from_scalar_moments(&semicircle_moments(5));
    assert!(free_sum_moments(&m1, &m2, 5).is_err());
    assert!(r_transform_series(&m1, 5).is_err());
    let diag = MomentFamily::scalar_lift(BaseAlgebra::diagonal(2), &semicircle_moments(3));
    assert!(free_sum_moments(&m1, &diag, 2).is_err());
}
