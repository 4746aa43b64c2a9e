mod common;

use base_algebra::{BaseAlgebra, MatOverB};
use linalg_core::{complex_ginibre, cplx, derive_rng, ComplexMatrix};
use matricial_calculus::{
    diff_quotient, diff_quotient_nested, matricial_law_residual, tensor_entry, BlockMode,
    CalcError, MatricialFn,
};
use ncpoly::{NCPoly, NCTensor3};

use common::{random_poly, scalars};

/// Independent reading of the quotient from the symbolic derivative:
/// `Σ c · u(β′) ⊗ v(β″)` with the level of `β′` outermost.
fn kron_oracle(p: &NCPoly, b1: &MatOverB, b2: &MatOverB) -> ComplexMatrix {
    let alg = p.algebra();
    let m = b1.level();
    let n = b2.level();
    let mut acc = ComplexMatrix::zeros(m * n, m * n);
    for ((u, v), c) in p.symbolic_derivative().terms() {
        let mu = NCPoly::monomial(alg, u.clone(), cplx(1.0, 0.0)).unwrap();
        let mv = NCPoly::monomial(alg, v.clone(), cplx(1.0, 0.0)).unwrap();
        let lhs = mu.evaluate(b1).unwrap();
        let rhs = mv.evaluate(b2).unwrap();
        acc = acc.add(&lhs.kron(&rhs).scale(*c)).unwrap();
    }
    acc
}

fn triple_kron_oracle(
    t3: &NCTensor3,
    alg: BaseAlgebra,
    b1: &MatOverB,
    b2: &MatOverB,
    b3: &MatOverB,
) -> ComplexMatrix {
    let size = b1.level() * b2.level() * b3.level();
    let mut acc = ComplexMatrix::zeros(size, size);
    for ((u, v, w), c) in t3.terms() {
        let mu = NCPoly::monomial(alg, u.clone(), cplx(1.0, 0.0)).unwrap();
        let mv = NCPoly::monomial(alg, v.clone(), cplx(1.0, 0.0)).unwrap();
        let mw = NCPoly::monomial(alg, w.clone(), cplx(1.0, 0.0)).unwrap();
        let a = mu.evaluate(b1).unwrap();
        let b = mv.evaluate(b2).unwrap();
        let d = mw.evaluate(b3).unwrap();
        acc = acc.add(&a.kron(&b).kron(&d).scale(*c)).unwrap();
    }
    acc
}

#[test]
fn square_quotient_is_sum_of_endpoints() {
    let alg = scalars();
    let z = NCPoly::generator(alg, 0).unwrap();
    let p = z.try_mul(&z).unwrap();
    let f = MatricialFn::from_poly(&p, f64::INFINITY);

    let x = cplx(0.7, 0.1);
    let y = cplx(-0.3, 0.2);
    let mut b1 = MatOverB::zeros(alg, 1);
    b1.set_entry(0, 0, &ComplexMatrix::scalar(1, x)).unwrap();
    let mut b2 = MatOverB::zeros(alg, 1);
    b2.set_entry(0, 0, &ComplexMatrix::scalar(1, y)).unwrap();

    let d = diff_quotient(&f, &b1, &b2).unwrap();
    assert_eq!(d.rows(), 1);
    assert!((d.get(0, 0) - (x + y)).norm() < 1e-12);
}

#[test]
fn quotient_matches_symbolic_kron_oracle() {
    for (tag, alg) in [
        (0u64, BaseAlgebra::full_matrix(2)),
        (1u64, BaseAlgebra::diagonal(2)),
    ] {
        for seed in 0..6u64 {
            let mut rng = derive_rng(0x51_0a, &[tag, seed]);
            let p = random_poly(alg, 0, 4, 6, &mut rng);
            let m = 1 + (seed % 2) as usize;
            let n = 1 + (seed % 3) as usize;
            let b1 = MatOverB::random(alg, m, &mut rng, 0.8);
            let b2 = MatOverB::random(alg, n, &mut rng, 0.8);

            let f = MatricialFn::from_poly(&p, f64::INFINITY);
            let d = diff_quotient(&f, &b1, &b2).unwrap();
            let oracle = kron_oracle(&p, &b1, &b2);
            assert!(
                d.max_abs_diff(&oracle) < 1e-9,
                "algebra {tag} seed {seed}: dev {}",
                d.max_abs_diff(&oracle)
            );
        }
    }
}

#[test]
fn finite_difference_mode_agrees_with_exact() {
    let alg = BaseAlgebra::full_matrix(2);
    let mut rng = derive_rng(0x51_0b, &[]);
    let p = random_poly(alg, 0, 3, 5, &mut rng);
    let b1 = MatOverB::random(alg, 2, &mut rng, 0.7);
    let b2 = MatOverB::random(alg, 2, &mut rng, 0.7);

    let exact = MatricialFn::from_poly(&p, f64::INFINITY);
    let q = p.clone();
    let fd = MatricialFn::from_fn(alg, f64::INFINITY, BlockMode::FiniteDifference, move |b| {
        Ok(q.evaluate(b)?)
    });

    let de = diff_quotient(&exact, &b1, &b2).unwrap();
    let df = diff_quotient(&fd, &b1, &b2).unwrap();
    assert!(de.max_abs_diff(&df) < 1e-9, "dev {}", de.max_abs_diff(&df));
}

#[test]
fn nonlinear_probe_is_detected_in_exact_mode() {
    let alg = scalars();
    // Entrywise square: not a matricial function, and its off-diagonal probe
    // block is quadratic in the probe scale.
    let f = MatricialFn::from_fn(alg, f64::INFINITY, BlockMode::Exact, move |b| {
        let n = b.level();
        let mut out = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let e = b.extract_entry(i, j)?.get(0, 0);
                out.set(i, j, e * e);
            }
        }
        Ok(out)
    });
    let mut rng = derive_rng(0x51_0c, &[]);
    let b1 = MatOverB::random(alg, 2, &mut rng, 0.8);
    let b2 = MatOverB::random(alg, 2, &mut rng, 0.8);
    match diff_quotient(&f, &b1, &b2) {
        Err(CalcError::NonlinearProbe(_)) => {}
        other => panic!("expected a nonlinear-probe error, got {other:?}"),
    }
}

#[test]
fn polynomials_satisfy_direct_sum_and_similarity_laws() {
    for seed in 0..5u64 {
        let alg = BaseAlgebra::full_matrix(2);
        let mut rng = derive_rng(0x51_0d, &[seed]);
        let p = random_poly(alg, 0, 4, 6, &mut rng);
        let f = MatricialFn::from_poly(&p, f64::INFINITY);
        let b1 = MatOverB::random(alg, 2, &mut rng, 0.9);
        let b2 = MatOverB::random(alg, 3, &mut rng, 0.9);
        let mut s = complex_ginibre(2, &mut rng);
        while !s.is_invertible() {
            s = complex_ginibre(2, &mut rng);
        }
        let residual = matricial_law_residual(&f, &b1, &b2, &s).unwrap();
        assert!(residual < 1e-9, "seed {seed}: residual {residual}");
    }
}

#[test]
fn nested_quotient_matches_double_split() {
    let alg = BaseAlgebra::diagonal(2);
    for seed in 0..4u64 {
        let mut rng = derive_rng(0x51_0e, &[seed]);
        let p = random_poly(alg, 0, 3, 5, &mut rng);
        let levels = [(1, 2, 1), (2, 1, 2), (1, 1, 3), (2, 2, 1)][seed as usize];
        let b1 = MatOverB::random(alg, levels.0, &mut rng, 0.8);
        let b2 = MatOverB::random(alg, levels.1, &mut rng, 0.8);
        let b3 = MatOverB::random(alg, levels.2, &mut rng, 0.8);

        let f = MatricialFn::from_poly(&p, f64::INFINITY);
        let e = diff_quotient_nested(&f, &b1, &b2, &b3).unwrap();

        let t3 = p.symbolic_derivative().split_right();
        let oracle = triple_kron_oracle(&t3, alg, &b1, &b2, &b3);
        assert!(
            e.max_abs_diff(&oracle) < 1e-9,
            "seed {seed}: dev {}",
            e.max_abs_diff(&oracle)
        );
    }
}

#[test]
fn nested_quotient_kills_low_degrees() {
    let alg = scalars();
    let mut rng = derive_rng(0x51_0f, &[]);
    let b1 = MatOverB::random(alg, 2, &mut rng, 0.8);
    let b2 = MatOverB::random(alg, 1, &mut rng, 0.8);
    let b3 = MatOverB::random(alg, 2, &mut rng, 0.8);

    for p in [
        NCPoly::constant(alg, cplx(2.5, -1.0)),
        NCPoly::generator(alg, 0).unwrap(),
    ] {
        let f = MatricialFn::from_poly(&p, f64::INFINITY);
        let e = diff_quotient_nested(&f, &b1, &b2, &b3).unwrap();
        assert!(e.max_abs() < 1e-10);
    }
}

#[test]
fn quotient_obeys_leibniz_numerically() {
    let alg = BaseAlgebra::full_matrix(2);
    for seed in 0..5u64 {
        let mut rng = derive_rng(0x51_11, &[seed]);
        let p = random_poly(alg, 0, 3, 4, &mut rng);
        let q = random_poly(alg, 0, 3, 4, &mut rng);
        let pq = p.try_mul(&q).unwrap();
        let (m, n) = (2, 2);
        let b1 = MatOverB::random(alg, m, &mut rng, 0.8);
        let b2 = MatOverB::random(alg, n, &mut rng, 0.8);

        let d = |poly: &NCPoly| {
            diff_quotient(&MatricialFn::from_poly(poly, f64::INFINITY), &b1, &b2).unwrap()
        };
        let lhs = d(&pq);
        let left = p.evaluate(&b1).unwrap().kron(&ComplexMatrix::identity(n));
        let right = ComplexMatrix::identity(m).kron(&q.evaluate(&b2).unwrap());
        let rhs = left
            .multiply(&d(&q))
            .unwrap()
            .add(&d(&p).multiply(&right).unwrap())
            .unwrap();
        assert!(
            lhs.max_abs_diff(&rhs) < 1e-9,
            "seed {seed}: dev {}",
            lhs.max_abs_diff(&rhs)
        );
    }
}

#[test]
fn quotient_respects_direct_sums_in_the_first_argument() {
    let alg = BaseAlgebra::diagonal(2);
    let mut rng = derive_rng(0x51_12, &[]);
    let p = random_poly(alg, 0, 4, 5, &mut rng);
    let f = MatricialFn::from_poly(&p, f64::INFINITY);
    let (m1, m2, n) = (1usize, 2usize, 2usize);
    let a1 = MatOverB::random(alg, m1, &mut rng, 0.8);
    let a2 = MatOverB::random(alg, m2, &mut rng, 0.8);
    let b = MatOverB::random(alg, n, &mut rng, 0.8);

    let whole = diff_quotient(&f, &a1.direct_sum(&a2).unwrap(), &b).unwrap();
    let part1 = diff_quotient(&f, &a1, &b).unwrap();
    let part2 = diff_quotient(&f, &a2, &b).unwrap();

    let m = m1 + m2;
    for i in 0..m {
        for j in 0..m {
            for k in 0..n {
                for l in 0..n {
                    let got = tensor_entry(&whole, n, i, k, j, l);
                    let want = if i < m1 && j < m1 {
                        tensor_entry(&part1, n, i, k, j, l)
                    } else if i >= m1 && j >= m1 {
                        tensor_entry(&part2, n, i - m1, k, j - m1, l)
                    } else {
                        cplx(0.0, 0.0)
                    };
                    assert!((got - want).norm() < 1e-9);
                }
            }
        }
    }
}

#[test]
fn quotient_entry_layout_exposes_probe_action() {
    // D applied to a probe t must reproduce the off-diagonal block:
    // block(t)[i,l] = Σ_{j,k} D[(i,k),(j,l)] t[j,k].
    let alg = BaseAlgebra::full_matrix(2);
    let mut rng = derive_rng(0x51_10, &[]);
    let p = random_poly(alg, 1, 3, 4, &mut rng);
    let f = MatricialFn::from_poly(&p, f64::INFINITY);
    let (m, n) = (2, 2);
    let b1 = MatOverB::random(alg, m, &mut rng, 0.8);
    let b2 = MatOverB::random(alg, n, &mut rng, 0.8);
    let d = diff_quotient(&f, &b1, &b2).unwrap();

    let t = complex_ginibre(m, &mut rng);
    let tensor = p.symbolic_derivative();
    let expected = tensor.evaluate_bilinear(&b1, &b2, &t).unwrap();
    for i in 0..m {
        for l in 0..n {
            let mut acc = cplx(0.0, 0.0);
            for j in 0..m {
                for k in 0..n {
                    acc += tensor_entry(&d, n, i, k, j, l) * t.get(j, k);
                }
            }
            assert!((acc - expected.get(i, l)).norm() < 1e-9);
        }
    }
}
