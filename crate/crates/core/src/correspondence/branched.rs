//! Branched points and branched values.
//!
//! `B` is the set of `z` admitting some `w` with `e(z, w) >= 2`, and `C` the
//! set of such `w`. `B~` and `C~` are the same sets for `p(w, z)`.
//! Finite candidates are roots of the squarefree parts of
//! `Res_w(p, p_z)` and `Res_z(p, p_z)`; infinity is always a candidate.
//! Every candidate is polished by Newton's method on `p = p_z = 0` and then
//! kept only if a recomputed fiber shows a multiple point.

use super::{Correspondence, SpherePoint};
use crate::error::{Error, Result};
use crate::polyalg::{
    projective_roots, resultant_w, resultant_z, BivariatePolynomial, ChartPolicy, ExactPolynomial,
};
use crate::sphere::Chart;
use num_complex::Complex64;

/// Optional restriction of the branched sets to a subset of the sphere.
#[derive(Clone, Debug, Default)]
pub enum Restriction {
    #[default]
    None,
    /// The unit circle `T`.
    UnitCircle,
    /// A finite set of points.
    Points(Vec<SpherePoint>),
}

impl Restriction {
    fn keeps(&self, p: &SpherePoint, tol: f64) -> bool {
        match self {
            Restriction::None => true,
            Restriction::UnitCircle => p.distance_to_circle() <= tol,
            Restriction::Points(v) => v.iter().any(|q| q.chordal_distance(p) <= tol),
        }
    }
}

/// The four branched sets, each sorted canonically.
#[derive(Clone, Debug, Default)]
pub struct BranchedSets {
    pub b: Vec<SpherePoint>,
    pub c: Vec<SpherePoint>,
    pub b_tilde: Vec<SpherePoint>,
    pub c_tilde: Vec<SpherePoint>,
}

impl BranchedSets {
    /// Upper bounds `(#B, #C, #B~, #C~)` for bidegree `(m, n)`.
    pub fn bounds(m: usize, n: usize) -> [usize; 4] {
        [
            2 * m * (m - 1) * n,
            2 * (m - 1) * n,
            2 * n * (n - 1) * m,
            2 * (n - 1) * m,
        ]
    }

    pub fn cardinalities(&self) -> [usize; 4] {
        [
            self.b.len(),
            self.c.len(),
            self.b_tilde.len(),
            self.c_tilde.len(),
        ]
    }

    pub fn within_bounds(&self, m: usize, n: usize) -> bool {
        self.cardinalities()
            .iter()
            .zip(Self::bounds(m, n))
            .all(|(c, b)| *c <= b)
    }
}

impl Correspondence {
    /// Computes `B, C, B~, C~`, optionally intersected with a restriction
    /// (chordal tolerance `restrict` from the correspondence tolerances).
    pub fn branched_sets(&self, restrict: &Restriction) -> Result<BranchedSets> {
        let (b, c) = branched_pair(self)?;
        let (bt, ct) = branched_pair(&self.transposed())?;
        let tol = self.tolerances().restrict;
        let filter = |v: Vec<SpherePoint>| -> Vec<SpherePoint> {
            v.into_iter().filter(|p| restrict.keeps(p, tol)).collect()
        };
        Ok(BranchedSets {
            b: filter(b),
            c: filter(c),
            b_tilde: filter(bt),
            c_tilde: filter(ct),
        })
    }
}

/// `(B, C)` for `corr`.
fn branched_pair(corr: &Correspondence) -> Result<(Vec<SpherePoint>, Vec<SpherePoint>)> {
    let p = corr.polynomial();
    let pz = p.partial_z();
    let tol = corr.tolerances();

    // B: candidates z from Res_w(p, p_z), verified over each w in the forward fiber
    let mut b = Vec::new();
    let zcands = candidates(&resultant_w(p, &pz)?, tol.cluster)?;
    for z0 in zcands {
        let fw = corr.forward_fiber(&z0, tol.cluster)?;
        for wp in &fw.points {
            if let Some((z, _)) = verified_multiple(corr, z0, wp.point)? {
                push_unique(&mut b, z, tol.cluster);
            }
        }
    }

    // C: candidates w from Res_z(p, p_z), verified on the backward fiber
    let mut c = Vec::new();
    for w0 in candidates(&resultant_z(p, &pz)?, tol.cluster)? {
        let bw = corr.backward_fiber(&w0, tol.cluster)?;
        for zp in &bw.points {
            if let Some((_, w)) = verified_multiple(corr, zp.point, w0)? {
                push_unique(&mut c, w, tol.cluster);
            }
        }
    }
    b.sort_by(|x, y| x.canonical_cmp(y));
    c.sort_by(|x, y| x.canonical_cmp(y));
    Ok((b, c))
}

fn push_unique(v: &mut Vec<SpherePoint>, p: SpherePoint, tol: f64) {
    if !v.iter().any(|q| q.chordal_distance(&p) <= tol) {
        v.push(p);
    }
}

/// Roots of the squarefree part of `r`, plus infinity.
fn candidates(r: &ExactPolynomial, tol: f64) -> Result<Vec<SpherePoint>> {
    if r.is_zero() {
        return Err(Error::invalid(
            "resultant vanishes identically; polynomial is not reduced",
        ));
    }
    let mut out = vec![SpherePoint::infinity()];
    let s = r.squarefree_part();
    if s.degree() >= 1 {
        let coeffs: Vec<Complex64> = s.to_c64().into_coeffs();
        for root in projective_roots(&coeffs, tol, ChartPolicy::Auto)? {
            if !root.point.is_infinity() {
                out.push(root.point);
            }
        }
    }
    Ok(out)
}

/// If `(z0, w0)` is (near) a point with `e >= 2`, the polished pair.
fn verified_multiple(
    corr: &Correspondence,
    z0: SpherePoint,
    w0: SpherePoint,
) -> Result<Option<(SpherePoint, SpherePoint)>> {
    let tol = corr.tolerances();
    let (z, w) = polish(corr.polynomial(), z0, w0);
    let fib = corr.backward_fiber(&w, tol.cluster)?;
    Ok(match fib.find(&z, tol.matching) {
        Some(fp) if fp.multiplicity >= 2 => Some((fp.point, w)),
        _ => None,
    })
}

/// `p` rewritten in the chart `(x, y)` with `x = z` or `1/z` and `y = w` or
/// `1/w`, multiplied through to stay polynomial.
fn chart_polynomial(p: &BivariatePolynomial, flip_z: bool, flip_w: bool) -> BivariatePolynomial {
    let (m, n) = (p.deg_z(), p.deg_w());
    let grid = (0..=m)
        .map(|i| {
            (0..=n)
                .map(|j| {
                    let si = if flip_z { m - i } else { i };
                    let sj = if flip_w { n - j } else { j };
                    p.coeff(si, sj)
                })
                .collect()
        })
        .collect();
    BivariatePolynomial::from_grid(grid)
}

fn chart_coord(p: &SpherePoint) -> (bool, Complex64) {
    match p.chart() {
        Chart::Z(z) => (false, z),
        Chart::U(u) => (true, u),
    }
}

fn from_chart(flip: bool, x: Complex64) -> SpherePoint {
    if flip {
        SpherePoint::from_inverse(x)
    } else {
        SpherePoint::finite(x)
    }
}

/// Newton's method on `q = q_x = 0` in the charts of the starting point.
/// Returns the input unchanged if the iteration does not improve it.
fn polish(p: &BivariatePolynomial, z0: SpherePoint, w0: SpherePoint) -> (SpherePoint, SpherePoint) {
    let (fz, mut x) = chart_coord(&z0);
    let (fw, mut y) = chart_coord(&w0);
    let q = chart_polynomial(p, fz, fw);
    let qx = q.partial_z();
    let qy = q.partial_w();
    let qxx = qx.partial_z();
    let qxy = qx.partial_w();
    let resid = |x: Complex64, y: Complex64| q.eval(x, y).norm() + qx.eval(x, y).norm();
    let start = resid(x, y);
    let (x0, y0) = (x, y);
    for _ in 0..40 {
        let f1 = q.eval(x, y);
        let f2 = qx.eval(x, y);
        let (a, b) = (qx.eval(x, y), qy.eval(x, y));
        let (c, d) = (qxx.eval(x, y), qxy.eval(x, y));
        let det = a * d - b * c;
        if det.norm() == 0.0 || !det.is_finite() {
            break;
        }
        let dx = (d * f1 - b * f2) / det;
        let dy = (a * f2 - c * f1) / det;
        x -= dx;
        y -= dy;
        if !(x.is_finite() && y.is_finite()) || (x - x0).norm() + (y - y0).norm() > 1e-3 {
            return (z0, w0);
        }
        if dx.norm() + dy.norm() <= 1e-15 * (1.0 + x.norm() + y.norm()) {
            break;
        }
    }
    if resid(x, y) <= start {
        (from_chart(fz, x), from_chart(fw, y))
    } else {
        (z0, w0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn has(v: &[SpherePoint], z: Option<Complex64>) -> bool {
        let q = match z {
            Some(z) => SpherePoint::finite(z),
            None => SpherePoint::infinity(),
        };
        v.iter().any(|p| p.chordal_distance(&q) < 1e-7)
    }

    #[test]
    fn graph_of_square() {
        let k = Correspondence::new(BivariatePolynomial::graph_of_power(2)).unwrap();
        let s = k.branched_sets(&Restriction::None).unwrap();
        assert_eq!(s.c.len(), 2);
        assert!(has(&s.c, Some(c(0.0, 0.0))));
        assert!(has(&s.c, None));
        assert_eq!(s.b.len(), 2);
        assert!(s.b_tilde.is_empty() && s.c_tilde.is_empty());
        assert!(s.within_bounds(2, 1));
    }

    #[test]
    fn product_on_circle() {
        let k = Correspondence::product_of_powers(&[2, 3]).unwrap();
        let s = k.branched_sets(&Restriction::UnitCircle).unwrap();
        assert_eq!(s.b.len(), 1);
        assert!(has(&s.b, Some(c(1.0, 0.0))));
        let all = k.branched_sets(&Restriction::None).unwrap();
        for z in [Some(c(0.0, 0.0)), Some(c(1.0, 0.0)), None] {
            assert!(has(&all.b, z));
        }
        assert!(all.within_bounds(5, 2));
    }

    #[test]
    fn product_with_gap_three_on_circle() {
        let k = Correspondence::product_of_powers(&[2, 5]).unwrap();
        let s = k.branched_sets(&Restriction::UnitCircle).unwrap();
        assert_eq!(s.b.len(), 3);
        for j in 0..3 {
            let r = Complex64::from_polar(1.0, std::f64::consts::TAU * j as f64 / 3.0);
            assert!(has(&s.b, Some(r)));
        }
    }

    #[test]
    fn circle_relation() {
        // z^2 + w^2 = 1: e(0, +-1) = 2 and e(inf, inf) = 2
        let k = Correspondence::new(BivariatePolynomial::from_int_terms(&[
            (2, 0, 1),
            (0, 2, 1),
            (0, 0, -1),
        ]))
        .unwrap();
        let s = k.branched_sets(&Restriction::None).unwrap();
        assert_eq!(s.b.len(), 2);
        assert!(has(&s.b, Some(c(0.0, 0.0))) && has(&s.b, None));
        assert_eq!(s.c.len(), 3);
        assert!(has(&s.c, Some(c(1.0, 0.0))) && has(&s.c, Some(c(-1.0, 0.0))));
        assert_eq!(s.cardinalities(), [2, 3, 2, 3]);
        let r = k
            .branched_sets(&Restriction::Points(vec![SpherePoint::finite(c(1.0, 0.0))]))
            .unwrap();
        assert!(r.b.is_empty());
        assert_eq!(r.c.len(), 1);
    }

    #[test]
    fn monomial_branching_only_at_poles() {
        let k = Correspondence::monomial(3, 2).unwrap();
        let s = k.branched_sets(&Restriction::UnitCircle).unwrap();
        assert_eq!(s.cardinalities(), [0, 0, 0, 0]);
    }
}
