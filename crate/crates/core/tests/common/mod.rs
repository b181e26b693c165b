#![allow(dead_code)]

use corrdyn_core::{BivariatePolynomial, Correspondence, SpherePoint};
use num_complex::Complex64;
use proptest::prelude::*;

/// Integer coefficient grids with `1 <= deg_z, deg_w <= max`.
pub fn int_grid(max: usize) -> impl Strategy<Value = Vec<(usize, usize, i64)>> {
    (1..=max, 1..=max).prop_flat_map(|(dz, dw)| {
        proptest::collection::vec(-5i64..=5, (dz + 1) * (dw + 1)).prop_map(move |c| {
            let mut terms: Vec<(usize, usize, i64)> = c
                .iter()
                .enumerate()
                .map(|(k, &v)| (k / (dw + 1), k % (dw + 1), v))
                .collect();
            // pin the corner degrees so the bidegree is (dz, dw)
            terms.push((dz, 0, 1));
            terms.push((0, dw, 1));
            terms
        })
    })
}

/// A correspondence from a random grid, if the grid is admissible.
pub fn correspondence(terms: &[(usize, usize, i64)]) -> Option<Correspondence> {
    Correspondence::new(BivariatePolynomial::from_int_terms(terms)).ok()
}

pub fn point() -> impl Strategy<Value = SpherePoint> {
    (0.05f64..3.0, 0.0f64..std::f64::consts::TAU)
        .prop_map(|(r, t)| SpherePoint::finite(Complex64::from_polar(r, t)))
}

pub fn c(re: f64, im: f64) -> SpherePoint {
    SpherePoint::finite(Complex64::new(re, im))
}
