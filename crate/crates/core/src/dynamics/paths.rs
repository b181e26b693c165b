//! Paths `(z_1, ..., z_{n+1})` with `p(z_i, z_{i+1}) = 0`, invariant sets and
//! finite forward propagation.

use crate::correspondence::{Correspondence, WeightedFiber};
use crate::error::{Error, Result};
use crate::sphere::SpherePoint;
use serde::Serialize;

/// Largest number of paths [`path_space`] will materialize.
pub const PATH_CAP: usize = 1_000_000;

/// A path with its weight `e(z_1, ..., z_{n+1}) = prod e(z_i, z_{i+1})`.
#[derive(Clone, Debug, PartialEq)]
pub struct PathSample {
    pub points: Vec<SpherePoint>,
    pub weight: u64,
}

impl PathSample {
    pub fn len(&self) -> usize {
        self.points.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.points.len() <= 1
    }

    pub fn start(&self) -> SpherePoint {
        self.points[0]
    }

    pub fn end(&self) -> SpherePoint {
        *self.points.last().expect("nonempty path")
    }
}

/// A finite set of sphere points, deduplicated at a chordal tolerance and
/// kept in insertion order.
#[derive(Clone, Debug, Default)]
pub struct PointSet {
    points: Vec<SpherePoint>,
    tol: f64,
}

impl PointSet {
    pub fn new(tol: f64) -> Self {
        PointSet {
            points: Vec::new(),
            tol,
        }
    }

    /// Index of a point within `tol` of `p`.
    pub fn position(&self, p: &SpherePoint) -> Option<usize> {
        self.points
            .iter()
            .position(|q| q.chordal_distance(p) <= self.tol)
    }

    pub fn contains(&self, p: &SpherePoint) -> bool {
        self.position(p).is_some()
    }

    /// Inserts `p` unless present; returns its index.
    pub fn insert(&mut self, p: SpherePoint) -> usize {
        match self.position(&p) {
            Some(i) => i,
            None => {
                self.points.push(p);
                self.points.len() - 1
            }
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[SpherePoint] {
        &self.points
    }

    /// Points in canonical order.
    pub fn sorted(&self) -> Vec<SpherePoint> {
        let mut v = self.points.clone();
        v.sort_by(|a, b| a.canonical_cmp(b));
        v
    }
}

/// Memoized fibers for repeated branch index lookups.
pub(crate) struct FiberCache<'a> {
    corr: &'a Correspondence,
    tol: f64,
    backward: Vec<(SpherePoint, WeightedFiber)>,
    forward: Vec<(SpherePoint, WeightedFiber)>,
}

impl<'a> FiberCache<'a> {
    pub(crate) fn new(corr: &'a Correspondence, tol: f64) -> Self {
        FiberCache {
            corr,
            tol,
            backward: Vec::new(),
            forward: Vec::new(),
        }
    }

    pub(crate) fn backward(&mut self, w: &SpherePoint) -> Result<&WeightedFiber> {
        if let Some(i) = self.backward.iter().position(|(b, _)| b == w) {
            return Ok(&self.backward[i].1);
        }
        let f = self.corr.backward_fiber(w, self.tol)?;
        self.backward.push((*w, f));
        Ok(&self.backward.last().expect("just pushed").1)
    }

    pub(crate) fn forward(&mut self, z: &SpherePoint) -> Result<&WeightedFiber> {
        if let Some(i) = self.forward.iter().position(|(b, _)| b == z) {
            return Ok(&self.forward[i].1);
        }
        let f = self.corr.forward_fiber(z, self.tol)?;
        self.forward.push((*z, f));
        Ok(&self.forward.last().expect("just pushed").1)
    }

    /// `e(z, w)` read off the backward fiber over `w`.
    pub(crate) fn edge_weight(&mut self, z: &SpherePoint, w: &SpherePoint) -> Result<u64> {
        let matching = self.corr.tolerances().matching;
        let fib = self.backward(w)?;
        fib.find(z, matching)
            .map(|p| p.multiplicity as u64)
            .ok_or_else(|| Error::NonConvergence {
                context: format!(
                    "{z} from the forward fiber is missing from the backward fiber over {w}"
                ),
                iterations: 0,
            })
    }
}

/// All paths of length `n` starting in `start`, following forward fibers.
pub fn path_space(
    corr: &Correspondence,
    start: &[SpherePoint],
    n: usize,
    tol: f64,
) -> Result<Vec<PathSample>> {
    let mut cache = FiberCache::new(corr, tol);
    let mut paths: Vec<PathSample> = start
        .iter()
        .map(|z| PathSample {
            points: vec![*z],
            weight: 1,
        })
        .collect();
    for _ in 0..n {
        let mut next = Vec::new();
        for path in &paths {
            let z = path.end();
            let targets: Vec<SpherePoint> =
                cache.forward(&z)?.points.iter().map(|p| p.point).collect();
            for w in targets {
                let e = cache.edge_weight(&z, &w)?;
                let mut points = path.points.clone();
                points.push(w);
                next.push(PathSample {
                    points,
                    weight: path.weight * e,
                });
                if next.len() > PATH_CAP {
                    return Err(Error::resource(format!(
                        "more than {PATH_CAP} paths of length {n}"
                    )));
                }
            }
        }
        paths = next;
    }
    Ok(paths)
}

/// Direction of the fiber in which an invariance violation was found.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// A solution `w` of `p(z, w) = 0` for some `z` in `J`.
    Forward,
    /// A solution `z` of `p(z, w) = 0` for some `w` in `J`.
    Backward,
}

/// A point of `J` whose fiber leaves `J`.
#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub base: SpherePoint,
    pub escaped: SpherePoint,
    pub direction: Direction,
}

#[derive(Clone, Debug, PartialEq)]
pub struct InvariantReport {
    pub invariant: bool,
    pub witness: Option<Violation>,
}

/// Checks that backward and forward fibers of every point of `J` stay in `J`
/// (chordal tolerance `tol`, also used for fiber clustering).
pub fn invariant_check(
    corr: &Correspondence,
    j: &[SpherePoint],
    tol: f64,
) -> Result<InvariantReport> {
    let mut set = PointSet::new(corr.tolerances().matching.max(tol));
    for p in j {
        set.insert(*p);
    }
    for direction in [Direction::Backward, Direction::Forward] {
        for base in j {
            let fib = match direction {
                Direction::Backward => corr.backward_fiber(base, tol)?,
                Direction::Forward => corr.forward_fiber(base, tol)?,
            };
            if let Some(fp) = fib.points.iter().find(|fp| !set.contains(&fp.point)) {
                return Ok(InvariantReport {
                    invariant: false,
                    witness: Some(Violation {
                        base: *base,
                        escaped: fp.point,
                        direction,
                    }),
                });
            }
        }
    }
    Ok(InvariantReport {
        invariant: true,
        witness: None,
    })
}

/// `U^(n)`: the endpoints of length-`n` paths starting in `U`, sorted.
pub fn propagate_finite(
    corr: &Correspondence,
    u: &[SpherePoint],
    n: usize,
    tol: f64,
) -> Result<Vec<SpherePoint>> {
    let dedup = corr.tolerances().matching.max(tol);
    let mut cur = PointSet::new(dedup);
    for p in u {
        cur.insert(*p);
    }
    for _ in 0..n {
        let mut next = PointSet::new(dedup);
        for z in cur.points() {
            for fp in corr.forward_fiber(z, tol)?.points {
                next.insert(fp.point);
            }
        }
        cur = next;
    }
    Ok(cur.sorted())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::BivariatePolynomial;
    use num_complex::Complex64;

    fn circle() -> Correspondence {
        Correspondence::new(BivariatePolynomial::from_int_terms(&[
            (2, 0, 1),
            (0, 2, 1),
            (0, 0, -1),
        ]))
        .unwrap()
    }

    fn pt(x: f64) -> SpherePoint {
        SpherePoint::finite(Complex64::new(x, 0.0))
    }

    fn near(a: &SpherePoint, b: &SpherePoint) -> bool {
        a.chordal_distance(b) < 1e-9
    }

    fn j() -> Vec<SpherePoint> {
        vec![pt(0.0), pt(1.0), pt(-1.0)]
    }

    #[test]
    fn circle_paths_of_length_two() {
        let paths = path_space(&circle(), &j(), 2, 1e-6).unwrap();
        assert_eq!(paths.len(), 6);
        let from_zero: Vec<_> = paths
            .iter()
            .filter(|p| near(&p.start(), &pt(0.0)))
            .collect();
        assert_eq!(from_zero.len(), 2);
        for p in &from_zero {
            assert!(near(&p.end(), &pt(0.0)));
            // e(0, +-1) = 2 and e(+-1, 0) = 1
            assert_eq!(p.weight, 2);
        }
    }

    #[test]
    fn fixed_point_path() {
        let k = Correspondence::new(BivariatePolynomial::graph_of_power(2)).unwrap();
        let paths = path_space(&k, &[pt(1.0)], 3, 1e-6).unwrap();
        assert_eq!(paths.len(), 1);
        assert!(paths[0].points.iter().all(|p| near(p, &pt(1.0))));
        assert_eq!(paths[0].len(), 3);
        assert_eq!(paths[0].weight, 1);
    }

    #[test]
    fn single_step_from_zero() {
        let paths = path_space(&circle(), &[pt(0.0)], 1, 1e-6).unwrap();
        assert_eq!(paths.len(), 2);
        assert!(paths.iter().all(|p| p.weight == 2));
    }

    #[test]
    fn invariant_examples() {
        let r = invariant_check(&circle(), &j(), 1e-6).unwrap();
        assert!(r.invariant);
        let r = invariant_check(&circle(), &[pt(0.0), pt(1.0)], 1e-6).unwrap();
        assert!(!r.invariant);
        let w = r.witness.unwrap();
        assert!(near(&w.escaped, &pt(-1.0)));
        assert!(near(&w.base, &pt(0.0)));
        assert_eq!(w.direction, Direction::Backward);
        // w = z^2: the fixed point 1 also has the preimage -1
        let k = Correspondence::new(BivariatePolynomial::graph_of_power(2)).unwrap();
        let r = invariant_check(&k, &[pt(1.0)], 1e-6).unwrap();
        assert!(!r.invariant);
        assert!(near(&r.witness.unwrap().escaped, &pt(-1.0)));
        let poles = [pt(0.0), SpherePoint::infinity()];
        assert!(invariant_check(&k, &poles, 1e-6).unwrap().invariant);
    }

    #[test]
    fn propagation_alternates() {
        let k = circle();
        let two = propagate_finite(&k, &[pt(0.0)], 2, 1e-6).unwrap();
        assert_eq!(two.len(), 1);
        assert!(near(&two[0], &pt(0.0)));
        let three = propagate_finite(&k, &[pt(0.0)], 3, 1e-6).unwrap();
        assert_eq!(three.len(), 2);
        assert!(near(&three[0], &pt(-1.0)) && near(&three[1], &pt(1.0)));
        assert!(propagate_finite(&k, &[], 4, 1e-6).unwrap().is_empty());
    }
}
