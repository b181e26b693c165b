mod common;

use common::{c, correspondence, int_grid, point};
use corrdyn_core::polyalg::ChartPolicy;
use corrdyn_core::{BivariatePolynomial, BranchedSets, Correspondence, Restriction, SpherePoint};
use num_complex::Complex64;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn fiber_sums_are_conserved(terms in int_grid(5), w in point(), z in point()) {
        let Some(k) = correspondence(&terms) else { return Ok(()); };
        let back = k.backward_fiber(&w, 1e-6).unwrap();
        prop_assert_eq!(back.total_multiplicity(), k.deg_z());
        let fwd = k.forward_fiber(&z, 1e-6).unwrap();
        prop_assert_eq!(fwd.total_multiplicity(), k.deg_w());
    }

    #[test]
    fn fibers_are_symmetric(terms in int_grid(4), z in point()) {
        let Some(k) = correspondence(&terms) else { return Ok(()); };
        for fp in k.forward_fiber(&z, 1e-6).unwrap().points {
            prop_assert!(k.on_correspondence(&z, &fp.point, 1e-8));
            let back = k.backward_fiber(&fp.point, 1e-6).unwrap();
            prop_assert!(back.find(&z, 1e-5).is_some());
        }
    }

    #[test]
    fn fibers_do_not_depend_on_the_chart(terms in int_grid(4), w in point()) {
        let Some(k) = correspondence(&terms) else { return Ok(()); };
        let a = k.backward_fiber_with(&w, 1e-6, ChartPolicy::Affine).unwrap();
        let b = k.backward_fiber_with(&w, 1e-6, ChartPolicy::Inverted).unwrap();
        prop_assert_eq!(a.points.len(), b.points.len());
        for p in &a.points {
            let q = b.find(&p.point, 1e-7);
            prop_assert!(q.is_some(), "{} missing from the inverted chart", p.point);
            prop_assert_eq!(q.unwrap().multiplicity, p.multiplicity);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn branched_sets_respect_bounds(terms in int_grid(4)) {
        let Some(k) = correspondence(&terms) else { return Ok(()); };
        let sets = k.branched_sets(&Restriction::None).unwrap();
        prop_assert!(
            sets.within_bounds(k.deg_z(), k.deg_w()),
            "{:?} exceeds {:?}",
            sets.cardinalities(),
            BranchedSets::bounds(k.deg_z(), k.deg_w())
        );
    }
}

/// `p = Q(z) w - P(z)` for `R = P / Q`, with `P`, `Q` as coefficient lists.
struct RationalMap {
    p: Vec<i64>,
    q: Vec<i64>,
    critical: Vec<(f64, usize)>,
}

fn horner(c: &[i64], z: Complex64) -> Complex64 {
    c.iter()
        .rev()
        .fold(Complex64::default(), |acc, &v| acc * z + v as f64)
}

/// Vanishing order of `P(x) - R(z0) Q(x)` at `x = z0`, from its Taylor
/// coefficients at `z0`.
fn vanishing_order(map: &RationalMap, z0: Complex64) -> usize {
    let w0 = horner(&map.p, z0) / horner(&map.q, z0);
    let len = map.p.len().max(map.q.len());
    let mut h: Vec<Complex64> = (0..len)
        .map(|i| {
            map.p.get(i).copied().unwrap_or(0) as f64
                - w0 * map.q.get(i).copied().unwrap_or(0) as f64
        })
        .collect();
    let scale = h.iter().map(|v| v.norm()).fold(1.0, f64::max);
    for order in 0..len {
        if horner_c(&h, z0).norm() > 1e-9 * scale {
            return order;
        }
        // divide by (x - z0)
        let mut q = vec![Complex64::default(); h.len() - 1];
        let mut carry = Complex64::default();
        for i in (1..h.len()).rev() {
            carry = h[i] + carry * z0;
            q[i - 1] = carry;
        }
        h = q;
    }
    len
}

fn horner_c(c: &[Complex64], z: Complex64) -> Complex64 {
    c.iter()
        .rev()
        .fold(Complex64::default(), |acc, v| acc * z + v)
}

#[test]
fn branch_index_matches_rational_map_order() {
    let maps = [
        RationalMap {
            p: vec![0, 0, 1],
            q: vec![1],
            critical: vec![(0.0, 2)],
        },
        RationalMap {
            p: vec![0, -3, 0, 1],
            q: vec![1],
            critical: vec![(1.0, 2), (-1.0, 2)],
        },
        RationalMap {
            p: vec![0, 0, 1],
            q: vec![-1, 2],
            critical: vec![(0.0, 2), (1.0, 2)],
        },
    ];
    for map in &maps {
        let mut terms = Vec::new();
        for (i, &v) in map.q.iter().enumerate() {
            terms.push((i, 1, v));
        }
        for (i, &v) in map.p.iter().enumerate() {
            terms.push((i, 0, -v));
        }
        let k = Correspondence::new(BivariatePolynomial::from_int_terms(&terms)).unwrap();
        let mut samples: Vec<Complex64> = map
            .critical
            .iter()
            .map(|(x, _)| Complex64::new(*x, 0.0))
            .collect();
        samples.extend(
            (0..20 - samples.len())
                .map(|j| Complex64::from_polar(0.3 + 0.1 * j as f64, 0.7 * j as f64 + 0.1)),
        );
        for z in samples {
            let w = horner(&map.p, z) / horner(&map.q, z);
            let e = k
                .branch_index(&SpherePoint::finite(z), &SpherePoint::finite(w))
                .unwrap();
            assert_eq!(
                e,
                vanishing_order(map, z),
                "R = {:?}/{:?} at {z}",
                map.p,
                map.q
            );
        }
        for (x, order) in &map.critical {
            assert_eq!(vanishing_order(map, Complex64::new(*x, 0.0)), *order);
        }
    }
}

#[test]
fn circle_relation_branches_at_poles_of_the_fiber() {
    let k = Correspondence::new(BivariatePolynomial::from_int_terms(&[
        (2, 0, 1),
        (0, 2, 1),
        (0, 0, -1),
    ]))
    .unwrap();
    assert_eq!(k.branch_index(&c(0.0, 0.0), &c(1.0, 0.0)).unwrap(), 2);
    assert_eq!(k.branch_index(&c(1.0, 0.0), &c(0.0, 0.0)).unwrap(), 1);
    assert!(k.branch_index(&c(0.5, 0.0), &c(0.5, 0.0)).is_err());
}
