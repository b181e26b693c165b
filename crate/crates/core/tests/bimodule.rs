mod common;

use common::c;
use corrdyn_core::bimodule::{
    fock_build, fock_relation_check, inner_product, monomial_basis, reconstruction_error,
    tensor_isometry_check, vanishing_lemma_check, FiniteBimodule, PathFunction, PathGrid,
    SampleGrid,
};
use corrdyn_core::polyalg::gq;
use corrdyn_core::{BivariatePolynomial, Correspondence, GaussianRational};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const MONOMIALS: [(usize, usize); 5] = [(1, 1), (2, 1), (2, 3), (3, 2), (4, 1)];

fn random_trig(rng: &mut ChaCha8Rng, len: usize) -> PathFunction {
    let coeffs: Vec<(i32, i32, Complex64)> = (0..4)
        .map(|_| {
            (
                rng.random_range(-3..=3),
                rng.random_range(-3..=3),
                Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
            )
        })
        .collect();
    PathFunction::new(len, move |p| {
        let z = p[0].affine().unwrap();
        let w = p[p.len() - 1].affine().unwrap();
        coeffs
            .iter()
            .map(|(i, j, a)| a * z.powi(*i) * w.powi(*j))
            .sum()
    })
}

#[test]
fn constants_have_inner_product_degree() {
    let ws = SampleGrid::Circle(512).points();
    for (m, n) in MONOMIALS {
        let k = Correspondence::monomial(m, n).unwrap();
        let one = PathFunction::constant(1, Complex64::new(1.0, 0.0));
        for w in &ws {
            let v = inner_product(&k, &one, &one, w, 1e-6).unwrap();
            assert!(
                (v - m as f64).norm() < 1e-9,
                "(m, n) = ({m}, {n}) at {w}: {v}"
            );
        }
    }
}

#[test]
fn norm_is_sandwiched() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let ws = SampleGrid::Circle(64).points();
    for (m, n) in MONOMIALS {
        let k = Correspondence::monomial(m, n).unwrap();
        let grid = PathGrid::new(&k, &ws, 1, 1e-6).unwrap();
        for _ in 0..100 {
            let f = grid.sample(&random_trig(&mut rng, 1)).unwrap();
            let (inf, two) = (f.norm_inf(), grid.norm2(&f).unwrap());
            assert!(inf <= two * (1.0 + 1e-12) + 1e-12);
            assert!(two <= (m as f64).sqrt() * inf * (1.0 + 1e-12) + 1e-12);
        }
    }
}

#[test]
fn inner_product_is_positive_and_detects_fiber_zeros() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let ws = SampleGrid::Circle(32).points();
    let k = Correspondence::monomial(3, 2).unwrap();
    let grid = PathGrid::new(&k, &ws, 1, 1e-6).unwrap();
    for _ in 0..50 {
        let f = grid.sample(&random_trig(&mut rng, 1)).unwrap();
        for v in grid.inner(&f, &f).unwrap() {
            assert!(v.re >= 0.0 && v.im.abs() < 1e-12);
        }
    }
    // on C_p, f = z^3 - w0^2 equals w^2 - w0^2, so it vanishes on the whole
    // fibers over +-w0 and nowhere else
    let w0 = ws[5].affine().unwrap();
    let target = w0 * w0;
    let f = PathFunction::on_edges(move |z, _| z.powu(3) - target);
    for w in &ws {
        let v = inner_product(&k, &f, &f, w, 1e-6).unwrap();
        let x = w.affine().unwrap();
        if (x * x - target).norm() < 1e-12 {
            assert!(v.norm() < 1e-20, "{v} at {w}");
        } else {
            assert!(v.re > 1e-6);
        }
    }
}

#[test]
fn inner_product_is_right_linear_and_left_adjoint() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let k = Correspondence::monomial(2, 3).unwrap();
    for w in SampleGrid::Circle(24).points() {
        let f = random_trig(&mut rng, 1);
        let g = random_trig(&mut rng, 1);
        let (p, s) = (
            rng.random_range(-3..=3),
            Complex64::new(rng.random(), rng.random()),
        );
        let b = PathFunction::on_base(move |z| s * z.powi(p));
        let a = PathFunction::on_base(move |z| s.conj() * z.powi(-p) + 1.0);
        let gb = g.act(None, Some(&b)).unwrap();
        let lhs = inner_product(&k, &f, &gb, &w, 1e-6).unwrap();
        let rhs = inner_product(&k, &f, &g, &w, 1e-6).unwrap() * b.eval(&[w]);
        assert!((lhs - rhs).norm() < 1e-10);
        let af = f.act(Some(&a), None).unwrap();
        let lhs = inner_product(&k, &af, &g, &w, 1e-6).unwrap();
        let direct: Complex64 = k
            .backward_fiber(&w, 1e-6)
            .unwrap()
            .points
            .iter()
            .map(|fp| {
                let edge = [fp.point, w];
                fp.multiplicity as f64 * (a.eval(&edge[..1]) * f.eval(&edge)).conj() * g.eval(&edge)
            })
            .sum();
        assert!((lhs - direct).norm() < 1e-10);
    }
}

#[test]
fn monomial_basis_is_orthonormal_and_reconstructs() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let ws = SampleGrid::Circle(64).points();
    for m in 1..=5 {
        let k = Correspondence::monomial(m, 2).unwrap();
        let basis = monomial_basis(m);
        for w in ws.iter().step_by(8) {
            for (i, u) in basis.iter().enumerate() {
                for (j, v) in basis.iter().enumerate() {
                    let x = inner_product(&k, u, v, w, 1e-6).unwrap();
                    let expected = if i == j { 1.0 } else { 0.0 };
                    assert!((x - expected).norm() < 1e-9);
                }
            }
        }
        let grid = PathGrid::new(&k, &ws, 1, 1e-6).unwrap();
        for _ in 0..5 {
            let f = random_trig(&mut rng, 1);
            assert!(reconstruction_error(&grid, &basis, &f).unwrap() < 1e-8);
        }
    }
}

#[test]
fn sampled_tensor_products_are_isometric() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let ws = SampleGrid::Circle(16).points();
    for (m, n) in [(2, 3), (3, 2), (2, 1)] {
        let k = Correspondence::monomial(m, n).unwrap();
        for len in 1..=3 {
            let fs: Vec<_> = (0..len).map(|_| random_trig(&mut rng, 1)).collect();
            let gs: Vec<_> = (0..len).map(|_| random_trig(&mut rng, 1)).collect();
            assert!(tensor_isometry_check(&k, &fs, &gs, &ws, 1e-6).unwrap() < 1e-9);
        }
    }
}

fn circle_bimodule() -> FiniteBimodule {
    let k = Correspondence::new(BivariatePolynomial::from_int_terms(&[
        (2, 0, 1),
        (0, 2, 1),
        (0, 0, -1),
    ]))
    .unwrap();
    FiniteBimodule::new(&k, &[c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)], 1e-6).unwrap()
}

fn gaussian() -> impl Strategy<Value = GaussianRational> {
    (-4i64..=4, -4i64..=4).prop_map(|(a, b)| gq(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn exact_tensor_products_are_isometric(
        fs in proptest::collection::vec(proptest::collection::vec(gaussian(), 4), 1..=3),
        gs in proptest::collection::vec(proptest::collection::vec(gaussian(), 4), 3),
    ) {
        let fb = circle_bimodule();
        prop_assert_eq!(fb.tensor_isometry_check(&fs, &gs[..fs.len()]).unwrap(), 0.0);
    }
}

#[test]
fn fock_relations_hold_exactly_on_the_circle_example() {
    let ft = fock_build(&circle_bimodule(), 3).unwrap();
    assert_eq!(ft.dims(), vec![3, 4, 6, 8]);
    let report = fock_relation_check(&ft).unwrap();
    assert!(report.exact);
    let a = vec![gq(0, 0), gq(1, 0), gq(0, 0)];
    let x = vec![gq(1, 1), gq(2, 0), gq(0, 0), gq(-1, 0)];
    let y: Vec<_> = (0..6).map(|i| gq(i, 1)).collect();
    assert!(vanishing_lemma_check(&ft, &a, 1, &x, 2, &y).unwrap().zero);
}
