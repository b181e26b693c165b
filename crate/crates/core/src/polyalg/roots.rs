//! Root finding on the projective line.
//!
//! Simultaneous Aberth-Ehrlich iteration produces simple approximations.
//! These are grouped by single linkage in the chordal metric. Groups that
//! are too spread out to be merged at `tol` but plausibly form one multiple
//! root are tested: the candidate center is refined by Newton's method on
//! the `(k-1)`-th derivative, and the group is accepted as a `k`-fold root
//! if the first `k` Taylor coefficients vanish to within rounding.

use super::univariate::UnivariatePolynomial;
use crate::error::{Error, Result};
use crate::sphere::{Chart, SpherePoint};
use num_complex::Complex64;
use std::f64::consts::TAU;

pub const DEFAULT_CLUSTER_TOL: f64 = 1e-6;
/// Cap on Aberth sweeps before reporting non-convergence.
pub const MAX_SWEEPS: usize = 200;

/// A root of a univariate polynomial with its multiplicity.
#[derive(Clone, Debug, PartialEq)]
pub struct RootCluster {
    pub center: Complex64,
    pub multiplicity: usize,
    /// Diameter of the merged approximations, `0` for exact roots.
    pub radius: f64,
}

/// Finite roots, plus the multiplicity of infinity when the caller's nominal
/// degree exceeds the true one.
#[derive(Clone, Debug, PartialEq)]
pub struct Roots {
    pub clusters: Vec<RootCluster>,
    pub at_infinity: usize,
}

impl Roots {
    pub fn total_multiplicity(&self) -> usize {
        self.clusters.iter().map(|c| c.multiplicity).sum::<usize>() + self.at_infinity
    }
}

/// A root on the sphere.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectiveRoot {
    pub point: SpherePoint,
    pub multiplicity: usize,
    pub radius: f64,
}

/// Which affine chart Aberth iterates in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ChartPolicy {
    /// Iterate on `f(z)`; large roots are evaluated through the reversal.
    #[default]
    Auto,
    /// Same iteration as `Auto`.
    Affine,
    /// Iterate on the reversed polynomial in `u = 1/z`.
    Inverted,
}

/// Roots of `f` with multiplicities. Fails on the zero polynomial.
pub fn roots(f: &UnivariatePolynomial, tol: f64) -> Result<Roots> {
    if f.is_zero() {
        return Err(Error::invalid("roots of the zero polynomial"));
    }
    let pr = projective_roots(f.coeffs(), tol, ChartPolicy::Auto)?;
    let mut clusters = Vec::new();
    let mut at_infinity = 0;
    for r in pr {
        match r.point.affine() {
            None => at_infinity += r.multiplicity,
            Some(z) => clusters.push(RootCluster {
                center: z,
                multiplicity: r.multiplicity,
                radius: r.radius,
            }),
        }
    }
    Ok(Roots {
        clusters,
        at_infinity,
    })
}

/// Roots of the binary form `sum a[i] z1^i z2^(d-i)`, `d = a.len() - 1`.
///
/// Exact zeros at either end of `a` become exact roots at `0` or infinity.
/// The multiplicities add up to `d`. Output is sorted canonically.
pub fn projective_roots(
    a: &[Complex64],
    tol: f64,
    policy: ChartPolicy,
) -> Result<Vec<ProjectiveRoot>> {
    if a.is_empty() || a.iter().all(|c| *c == Complex64::new(0.0, 0.0)) {
        return Err(Error::invalid("binary form vanishes identically"));
    }
    if a.iter().any(|c| !c.is_finite()) {
        return Err(Error::invalid("non-finite coefficient"));
    }
    let zero = Complex64::new(0.0, 0.0);
    let d = a.len() - 1;
    let lo = a.iter().take_while(|c| **c == zero).count();
    let hi = a.iter().rev().take_while(|c| **c == zero).count();
    let core = &a[lo..=d - hi];

    let mut raw: Vec<Raw> = Vec::with_capacity(d);
    raw.extend((0..lo).map(|_| Raw::exact(SpherePoint::zero())));
    raw.extend((0..hi).map(|_| Raw::exact(SpherePoint::infinity())));
    if core.len() > 1 {
        let approx: Vec<SpherePoint> = match policy {
            ChartPolicy::Auto | ChartPolicy::Affine => {
                aberth(core)?.into_iter().map(SpherePoint::finite).collect()
            }
            ChartPolicy::Inverted => {
                let rev: Vec<Complex64> = core.iter().rev().copied().collect();
                aberth(&rev)?
                    .into_iter()
                    .map(SpherePoint::from_inverse)
                    .collect()
            }
        };
        raw.extend(approx.into_iter().map(Raw::approx));
    }

    let fine = single_linkage(&raw, tol);
    let groups: Vec<Vec<Raw>> = fine
        .into_iter()
        .map(|idx| idx.into_iter().map(|i| raw[i]).collect())
        .collect();
    let fine_clusters: Vec<ProjectiveRoot> = groups
        .iter()
        .map(|g| {
            let mut c = summarize(g);
            if c.multiplicity >= 2 && g.iter().any(|r| !r.exact) {
                if let Some(center) = verify_multiple_root(a, c.point, c.multiplicity, tol) {
                    c.point = center;
                }
            }
            c
        })
        .collect();

    let mut out = Vec::new();
    let coarse = tol.sqrt().max(tol);
    merge_multiple(a, &fine_clusters, coarse, tol, &mut out);
    out.sort_by(|x, y| x.point.canonical_cmp(&y.point));
    Ok(out)
}

#[derive(Clone, Copy, Debug)]
struct Raw {
    point: SpherePoint,
    exact: bool,
}

impl Raw {
    fn exact(point: SpherePoint) -> Self {
        Raw { point, exact: true }
    }
    fn approx(point: SpherePoint) -> Self {
        Raw {
            point,
            exact: false,
        }
    }
}

fn summarize(g: &[Raw]) -> ProjectiveRoot {
    let radius = diameter(g.iter().map(|r| r.point));
    let point = match g.iter().find(|r| r.exact) {
        Some(r) => r.point,
        None => mean_point(g.iter().map(|r| r.point)),
    };
    ProjectiveRoot {
        point,
        multiplicity: g.len(),
        radius: if g.iter().all(|r| r.exact) {
            0.0
        } else {
            radius
        },
    }
}

fn diameter(pts: impl Iterator<Item = SpherePoint> + Clone) -> f64 {
    let v: Vec<SpherePoint> = pts.collect();
    let mut d: f64 = 0.0;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            d = d.max(v[i].chordal_distance(&v[j]));
        }
    }
    d
}

/// Average in the chart of the first point.
fn mean_point(pts: impl Iterator<Item = SpherePoint>) -> SpherePoint {
    let v: Vec<SpherePoint> = pts.collect();
    let n = v.len() as f64;
    match v[0].chart() {
        Chart::Z(_) => {
            let s: Complex64 = v.iter().map(to_z).sum();
            SpherePoint::finite(s / n)
        }
        Chart::U(_) => {
            let s: Complex64 = v.iter().map(to_u).sum();
            SpherePoint::from_inverse(s / n)
        }
    }
}

fn to_z(p: &SpherePoint) -> Complex64 {
    let (a, b) = p.coords();
    a / b
}

fn to_u(p: &SpherePoint) -> Complex64 {
    let (a, b) = p.coords();
    b / a
}

/// Connected components of the graph "chordal distance <= tol".
fn single_linkage(pts: &[Raw], tol: f64) -> Vec<Vec<usize>> {
    let n = pts.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for i in 0..n {
        for j in i + 1..n {
            if pts[i].point.chordal_distance(&pts[j].point) <= tol {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(i);
    }
    groups
}

/// Merges fine clusters into verified multiple roots, shrinking the linkage
/// radius on groups that fail verification.
fn merge_multiple(
    a: &[Complex64],
    clusters: &[ProjectiveRoot],
    radius: f64,
    tol: f64,
    out: &mut Vec<ProjectiveRoot>,
) {
    if clusters.len() == 1 || radius <= tol {
        out.extend_from_slice(clusters);
        return;
    }
    let raw: Vec<Raw> = clusters.iter().map(|c| Raw::approx(c.point)).collect();
    for group in single_linkage(&raw, radius) {
        let members: Vec<ProjectiveRoot> = group.iter().map(|&i| clusters[i].clone()).collect();
        if members.len() == 1 {
            out.push(members[0].clone());
            continue;
        }
        let k: usize = members.iter().map(|c| c.multiplicity).sum();
        let weighted = members
            .iter()
            .flat_map(|c| std::iter::repeat_n(c.point, c.multiplicity));
        let guess = mean_point(weighted);
        if let Some(center) = verify_multiple_root(a, guess, k, radius) {
            let radius = diameter(members.iter().map(|c| c.point))
                .max(members.iter().map(|c| c.radius).fold(0.0, f64::max));
            out.push(ProjectiveRoot {
                point: center,
                multiplicity: k,
                radius,
            });
        } else {
            merge_multiple(a, &members, radius / 4.0, tol, out);
        }
    }
}

/// Refines `guess` as a `k`-fold root of the binary form `a` and checks that
/// the first `k` Taylor coefficients vanish up to rounding.
fn verify_multiple_root(
    a: &[Complex64],
    guess: SpherePoint,
    k: usize,
    radius: f64,
) -> Option<SpherePoint> {
    let d = a.len() - 1;
    // chart polynomial h(t) and the point t0
    let (h, t0, inverted): (Vec<Complex64>, Complex64, bool) = match guess.chart() {
        Chart::Z(z) => (a.to_vec(), z, false),
        Chart::U(u) => (a.iter().rev().copied().collect(), u, true),
    };
    if k > d {
        return None;
    }
    let dk1 = nth_derivative(&h, k - 1);
    let dk = nth_derivative(&dk1, 1);
    let mut t = t0;
    for _ in 0..50 {
        let v = horner(&dk1, t);
        let dv = horner(&dk, t);
        if dv.norm() == 0.0 {
            break;
        }
        let step = v / dv;
        t -= step;
        if !t.is_finite() {
            return None;
        }
        if step.norm() <= 4.0 * f64::EPSILON * (1.0 + t.norm()) {
            break;
        }
    }
    let center = if inverted {
        SpherePoint::from_inverse(t)
    } else {
        SpherePoint::finite(t)
    };
    if center.chordal_distance(&guess) > 4.0 * radius {
        return None;
    }
    let eta = 256.0 * f64::EPSILON * (d as f64 + 1.0);
    let at = t.norm();
    for j in 0..k {
        let mut val = Complex64::new(0.0, 0.0);
        let mut bound = 0.0;
        for (i, c) in h.iter().enumerate().skip(j) {
            let b = binom(i, j);
            let p = t.powu((i - j) as u32);
            val += c * b * p;
            bound += c.norm() * b * at.powi((i - j) as i32);
        }
        if val.norm() > eta * bound {
            return None;
        }
    }
    Some(center)
}

fn binom(n: usize, k: usize) -> f64 {
    let mut r = 1.0;
    for i in 0..k {
        r = r * (n - i) as f64 / (i + 1) as f64;
    }
    r
}

fn nth_derivative(h: &[Complex64], k: usize) -> Vec<Complex64> {
    let mut v = h.to_vec();
    for _ in 0..k {
        if v.len() <= 1 {
            return vec![Complex64::new(0.0, 0.0)];
        }
        v = v
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * i as f64)
            .collect();
    }
    v
}

fn horner(c: &[Complex64], x: Complex64) -> Complex64 {
    c.iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, a| acc * x + a)
}

/// Aberth-Ehrlich iteration. `c[0]` and `c[d]` must be nonzero.
fn aberth(c: &[Complex64]) -> Result<Vec<Complex64>> {
    let d = c.len() - 1;
    if d == 1 {
        return Ok(vec![-c[0] / c[1]]);
    }
    let absc: Vec<f64> = c.iter().map(|x| x.norm()).collect();
    let rev: Vec<Complex64> = c.iter().rev().copied().collect();
    let mut z = initial_guesses(&absc);
    let mut done = vec![false; d];
    let slack = 4.0 * (d as f64 + 1.0) * f64::EPSILON;
    for _ in 0..MAX_SWEEPS {
        for i in 0..d {
            if done[i] {
                continue;
            }
            let zi = z[i];
            let (ratio, backward) = newton_correction(c, &rev, &absc, zi);
            if backward <= slack {
                done[i] = true;
                continue;
            }
            let mut s = Complex64::new(0.0, 0.0);
            for (j, zj) in z.iter().enumerate() {
                if j != i {
                    s += 1.0 / (zi - zj);
                }
            }
            // ratio holds f'/f
            let denom = ratio - s;
            let w = if denom.norm() == 0.0 || !denom.is_finite() {
                Complex64::new(f64::EPSILON, f64::EPSILON) * (1.0 + zi.norm())
            } else {
                1.0 / denom
            };
            z[i] = zi - w;
            if !z[i].is_finite() {
                return Err(Error::NonConvergence {
                    context: "Aberth iterate left the finite plane".into(),
                    iterations: 0,
                });
            }
            if w.norm() <= f64::EPSILON * z[i].norm() {
                if backward <= f64::EPSILON.sqrt() {
                    done[i] = true;
                } else {
                    // two iterates collided away from a root; push this one off
                    let kick =
                        Complex64::from_polar(1e-3 * (1.0 + zi.norm()), 2.4 * (i + 1) as f64);
                    z[i] = zi + kick;
                }
            }
        }
        if done.iter().all(|&x| x) {
            return Ok(z);
        }
    }
    Err(Error::NonConvergence {
        context: format!("Aberth iteration on a degree {d} polynomial"),
        iterations: MAX_SWEEPS,
    })
}

/// `f'(z)/f(z)` and the relative backward error `|f(z)| / sum |c_i| |z|^i`.
/// For `|z| > 1` both are computed through the reversed polynomial.
fn newton_correction(
    c: &[Complex64],
    rev: &[Complex64],
    absc: &[f64],
    z: Complex64,
) -> (Complex64, f64) {
    let d = c.len() - 1;
    if z.norm() <= 1.0 {
        let (f, df) = horner_with_derivative(c, z);
        let az = z.norm();
        let bound: f64 = absc.iter().rev().fold(0.0, |acc, a| acc * az + a);
        (df / f, f.norm() / bound)
    } else {
        let u = 1.0 / z;
        let (g, dg) = horner_with_derivative(rev, u);
        let au = u.norm();
        let bound: f64 = absc.iter().fold(0.0, |acc, a| acc * au + a);
        (u * (d as f64 - u * dg / g), g.norm() / bound)
    }
}

fn horner_with_derivative(c: &[Complex64], x: Complex64) -> (Complex64, Complex64) {
    let mut f = Complex64::new(0.0, 0.0);
    let mut df = Complex64::new(0.0, 0.0);
    for a in c.iter().rev() {
        df = df * x + f;
        f = f * x + a;
    }
    (f, df)
}

/// Starting points on circles read off the Newton polygon of `|c_i|`.
fn initial_guesses(absc: &[f64]) -> Vec<Complex64> {
    let d = absc.len() - 1;
    let pts: Vec<(usize, f64)> = absc
        .iter()
        .enumerate()
        .filter(|(_, a)| **a > 0.0)
        .map(|(i, a)| (i, a.ln()))
        .collect();
    // upper convex hull
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for p in pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross =
                (b.0 as f64 - a.0 as f64) * (p.1 - a.1) - (b.1 - a.1) * (p.0 as f64 - a.0 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let sigma = 0.7;
    let mut z = Vec::with_capacity(d);
    for w in hull.windows(2) {
        let (i0, l0) = w[0];
        let (i1, l1) = w[1];
        let k = i1 - i0;
        let r = ((l0 - l1) / k as f64).exp();
        for j in 0..k {
            let ang = TAU * j as f64 / k as f64 + TAU * i0 as f64 / d as f64 + sigma;
            z.push(Complex64::from_polar(r, ang));
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::univariate::Poly;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn from_roots(rs: &[(Complex64, usize)]) -> UnivariatePolynomial {
        let mut p = Poly::constant(c(1.0, 0.0));
        for &(r, k) in rs {
            for _ in 0..k {
                p = &p * &Poly::new(vec![-r, c(1.0, 0.0)]);
            }
        }
        p
    }

    fn find(r: &Roots, z: Complex64) -> &RootCluster {
        r.clusters
            .iter()
            .min_by(|a, b| (a.center - z).norm().total_cmp(&(b.center - z).norm()))
            .unwrap()
    }

    #[test]
    fn colliding_iterates_are_separated() {
        // (1 - z^3)^2 (1 + z^3) at a slightly perturbed constant term; the
        // threefold symmetry used to park two iterates on top of each other
        let w = c(0.9999999999999998, 1.110223024625157e-16);
        let mut coeffs = vec![c(0.0, 0.0); 10];
        coeffs[0] = w * w;
        coeffs[3] = -w;
        coeffs[6] = -w;
        coeffs[9] = c(1.0, 0.0);
        let f = UnivariatePolynomial::new(coeffs);
        let r = roots(&f, 1e-6).unwrap();
        assert_eq!(r.clusters.len(), 6);
        for cl in &r.clusters {
            assert!(f.eval(&cl.center).norm() < 1e-12);
        }
        let cube = Complex64::from_polar(1.0, std::f64::consts::TAU / 3.0);
        assert_eq!(find(&r, cube).multiplicity, 2);
    }

    #[test]
    fn simple_quadratic() {
        let r = roots(&from_roots(&[(c(1.0, 0.0), 1), (c(-1.0, 0.0), 1)]), 1e-6).unwrap();
        assert_eq!(r.clusters.len(), 2);
        assert!((find(&r, c(1.0, 0.0)).center - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn exact_zero_roots() {
        let r = roots(
            &Poly::new(vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]),
            1e-6,
        )
        .unwrap();
        assert_eq!(r.clusters.len(), 1);
        assert_eq!(r.clusters[0].multiplicity, 2);
        assert_eq!(r.clusters[0].center, c(0.0, 0.0));
    }

    #[test]
    fn triple_root_is_merged() {
        let f = from_roots(&[(c(1.0, 0.0), 3), (c(-2.0, 0.5), 1)]);
        let r = roots(&f, 1e-6).unwrap();
        assert_eq!(r.clusters.len(), 2);
        let t = find(&r, c(1.0, 0.0));
        assert_eq!(t.multiplicity, 3);
        assert!((t.center - c(1.0, 0.0)).norm() < 1e-8);
    }

    #[test]
    fn nearby_multiple_roots_stay_apart() {
        let f = from_roots(&[(c(1.0, 0.0), 2), (c(1.05, 0.0), 3), (c(0.0, 1.0), 1)]);
        let r = roots(&f, 1e-6).unwrap();
        assert_eq!(find(&r, c(1.0, 0.0)).multiplicity, 2);
        assert_eq!(find(&r, c(1.05, 0.0)).multiplicity, 3);
        assert_eq!(r.clusters.len(), 3);
    }

    #[test]
    fn roots_of_unity_high_degree() {
        let mut v = vec![c(0.0, 0.0); 31];
        v[0] = c(-1.0, 0.0);
        v[30] = c(1.0, 0.0);
        let r = roots(&Poly::new(v), 1e-6).unwrap();
        assert_eq!(r.clusters.len(), 30);
        for cl in &r.clusters {
            assert!((cl.center.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn projective_infinity_from_nominal_degree() {
        // z1 z2 with nominal degree 2: roots 0 and infinity
        let r = projective_roots(
            &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
            1e-6,
            ChartPolicy::Auto,
        )
        .unwrap();
        assert_eq!(r.len(), 2);
        assert!(r.iter().any(|x| x.point.is_infinity()));
        // z2^2 (z1 - z2): infinity twice... as a form a = [-1, 1, 0, 0]
        let r = projective_roots(
            &[c(-1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
            1e-6,
            ChartPolicy::Auto,
        )
        .unwrap();
        let inf = r.iter().find(|x| x.point.is_infinity()).unwrap();
        assert_eq!(inf.multiplicity, 2);
    }

    #[test]
    fn chart_policies_agree() {
        let f = from_roots(&[(c(3.0, 1.0), 2), (c(0.1, -0.2), 1), (c(-40.0, 2.0), 1)]);
        let a = projective_roots(f.coeffs(), 1e-6, ChartPolicy::Affine).unwrap();
        let b = projective_roots(f.coeffs(), 1e-6, ChartPolicy::Inverted).unwrap();
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.multiplicity, y.multiplicity);
            assert!(x.point.chordal_distance(&y.point) < 1e-6);
        }
    }

    #[test]
    fn zero_polynomial_rejected() {
        assert!(roots(&Poly::zero(), 1e-6).is_err());
    }
}
