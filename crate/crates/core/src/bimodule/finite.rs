//! `X_p(J)` over a finite invariant set `J`, with exact Gaussian-rational
//! values.
//!
//! Elements of `C(P_k(J))` are vectors indexed by the paths of length `k` in
//! lexicographic order of their point indices; `k = 0` gives `A = C(J)`.

use crate::correspondence::Correspondence;
use crate::dynamics::invariant_check;
use crate::error::{Error, Result};
use crate::polyalg::{Coefficient, GaussianRational};
use crate::sphere::SpherePoint;
use num_traits::Zero;

/// An edge `(z, w)` of `C_p(J)` with branch index `e`, by indices into `J`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub z: usize,
    pub w: usize,
    pub e: u64,
}

/// A path by point indices, with weight `e(z_1, ..., z_{k+1})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexPath {
    pub points: Vec<usize>,
    pub weight: u64,
}

impl IndexPath {
    pub fn first(&self) -> usize {
        self.points[0]
    }

    pub fn last(&self) -> usize {
        *self.points.last().expect("nonempty path")
    }
}

#[derive(Clone, Debug)]
pub struct FiniteBimodule {
    pub j: Vec<SpherePoint>,
    /// Sorted by `(z, w)`.
    pub edges: Vec<Edge>,
    /// `deg_z p`, the total weight of every backward fiber.
    pub degree: usize,
}

impl FiniteBimodule {
    /// Builds `C_p(J)`. Fails unless `J` is `p`-invariant.
    pub fn new(corr: &Correspondence, j: &[SpherePoint], tol: f64) -> Result<Self> {
        if j.is_empty() {
            return Err(Error::invalid("J is empty"));
        }
        let report = invariant_check(corr, j, tol)?;
        if let Some(v) = report.witness {
            return Err(Error::invalid(format!(
                "J is not invariant: {:?} fiber of {} contains {}",
                v.direction, v.base, v.escaped
            )));
        }
        let matching = corr.tolerances().matching.max(tol);
        let index = |p: &SpherePoint| j.iter().position(|q| q.chordal_distance(p) <= matching);
        let mut edges = Vec::new();
        for (wi, w) in j.iter().enumerate() {
            let fib = corr.backward_fiber(w, tol)?;
            for fp in &fib.points {
                let zi = index(&fp.point).ok_or_else(|| {
                    Error::invalid(format!("fiber point {} is not in J", fp.point))
                })?;
                edges.push(Edge {
                    z: zi,
                    w: wi,
                    e: fp.multiplicity as u64,
                });
            }
            let total: usize = fib.points.iter().map(|p| p.multiplicity).sum();
            if total != corr.deg_z() {
                return Err(Error::NonConvergence {
                    context: format!("backward fiber of {w} has total weight {total}"),
                    iterations: 0,
                });
            }
        }
        edges.sort_by_key(|e| (e.z, e.w));
        Ok(FiniteBimodule {
            j: j.to_vec(),
            edges,
            degree: corr.deg_z(),
        })
    }

    pub fn dimension(&self) -> usize {
        self.edges.len()
    }

    /// `P_k(J)` in lexicographic order.
    pub fn paths(&self, k: usize) -> Vec<IndexPath> {
        let mut cur: Vec<IndexPath> = (0..self.j.len())
            .map(|i| IndexPath {
                points: vec![i],
                weight: 1,
            })
            .collect();
        for _ in 0..k {
            let mut next = Vec::new();
            for p in &cur {
                for e in self.edges.iter().filter(|e| e.z == p.last()) {
                    let mut pts = p.points.clone();
                    pts.push(e.w);
                    next.push(IndexPath {
                        points: pts,
                        weight: p.weight * e.e,
                    });
                }
            }
            cur = next;
        }
        cur
    }

    /// `(f|g)_A` as a function on `J`, for `f, g` in `C(P_k(J))`.
    pub fn inner(
        &self,
        k: usize,
        f: &[GaussianRational],
        g: &[GaussianRational],
    ) -> Result<Vec<GaussianRational>> {
        let paths = self.paths(k);
        if f.len() != paths.len() || g.len() != paths.len() {
            return Err(Error::invalid(format!(
                "vectors of length {} and {} on {} paths",
                f.len(),
                g.len(),
                paths.len()
            )));
        }
        let mut out = vec![GaussianRational::zero(); self.j.len()];
        for ((p, a), b) in paths.iter().zip(f).zip(g) {
            out[p.last()] = &out[p.last()] + weight(p.weight) * a.conj() * b;
        }
        Ok(out)
    }

    /// `f_1 ⊗ ... ⊗ f_n` in `C(P_n(J))` for edge functions `f_i`.
    pub fn tensor(&self, fs: &[Vec<GaussianRational>]) -> Result<Vec<GaussianRational>> {
        self.check_edge_functions(fs)?;
        Ok(self
            .paths(fs.len())
            .iter()
            .map(|p| {
                p.points
                    .windows(2)
                    .zip(fs)
                    .map(|(pair, f)| f[self.edge_index(pair[0], pair[1])].clone())
                    .fold(GaussianRational::from_i64(1), |acc, v| acc * v)
            })
            .collect())
    }

    /// Index of the edge `(z, w)`.
    pub fn edge_index(&self, z: usize, w: usize) -> usize {
        self.edges
            .binary_search_by_key(&(z, w), |e| (e.z, e.w))
            .expect("edge of a path")
    }

    fn check_edge_functions(&self, fs: &[Vec<GaussianRational>]) -> Result<()> {
        if fs.iter().any(|f| f.len() != self.edges.len()) {
            return Err(Error::invalid(format!(
                "edge functions must have {} values",
                self.edges.len()
            )));
        }
        Ok(())
    }

    /// Largest `|direct - recursive|` over `J` for
    /// `(f_1 ⊗ ... ⊗ f_n | g_1 ⊗ ... ⊗ g_n)_A`, computed exactly; zero means
    /// the tensor product is isometric onto `C(P_n(J))` for these inputs.
    pub fn tensor_isometry_check(
        &self,
        fs: &[Vec<GaussianRational>],
        gs: &[Vec<GaussianRational>],
    ) -> Result<f64> {
        if fs.is_empty() || fs.len() != gs.len() {
            return Err(Error::invalid("need two nonempty lists of equal length"));
        }
        self.check_edge_functions(gs)?;
        let direct = self.inner(fs.len(), &self.tensor(fs)?, &self.tensor(gs)?)?;
        // R_k(w) = sum over edges (z, w) of e conj(f_k) R_{k-1}(z) g_k
        let mut r = vec![GaussianRational::from_i64(1); self.j.len()];
        for (f, g) in fs.iter().zip(gs) {
            let mut next = vec![GaussianRational::zero(); self.j.len()];
            for (i, e) in self.edges.iter().enumerate() {
                next[e.w] = &next[e.w] + weight(e.e) * f[i].conj() * &r[e.z] * &g[i];
            }
            r = next;
        }
        Ok(direct
            .iter()
            .zip(&r)
            .map(|(a, b)| (a - b).magnitude())
            .fold(0.0, f64::max))
    }
}

pub(crate) fn weight(e: u64) -> GaussianRational {
    GaussianRational::from_i64(e as i64)
}
