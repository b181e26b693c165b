//! Generalized periodic points `GP(N)`: endpoints `w` reachable from a common
//! `z` by paths of two different lengths `r != s`, `0 <= r, s <= N`.

use super::paths::PointSet;
use super::CircleCorrespondence;
use crate::correspondence::Correspondence;
use crate::error::{Error, Result};
use crate::sphere::SpherePoint;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::ToPrimitive;
use std::collections::BTreeSet;

/// Largest `N` accepted by [`gp_enumerate`].
pub const GP_MAX_N: usize = 6;

/// Largest number of candidate intersections [`gp_enumerate`] will examine.
pub const GP_WORK_CAP: u128 = 20_000_000;

/// Chordal tolerance for matching endpoints in [`gp_sample`].
pub const GP_SAMPLE_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct GPReport {
    pub n: usize,
    /// `Some(true)` for an exact finite enumeration, `Some(false)` when
    /// `GP(N)` is proved infinite, `None` for heuristic reports.
    pub finite: Option<bool>,
    pub points: Vec<SpherePoint>,
    /// Exact angles `beta` with `w = e^{2 pi i beta}`, when enumerated.
    pub angles: Vec<Ratio<i128>>,
    /// Fraction of sampled `z` with two path lengths meeting (heuristic only).
    pub density: Option<f64>,
    pub certificate: String,
}

/// Enumerates `GP(N)` on `T` for `z^m - w^n` exactly.
///
/// `(alpha, beta)` is joined by a path of length `r` iff
/// `n^r beta - m^r alpha` lies in `c_r Z` with `c_0 = 1` and
/// `c_r = d^{r-1}`, `d = gcd(m, n)`. For `m != n` two such line families
/// with `r != s` have different slopes, and their intersections are found
/// by solving the 2x2 system for every admissible pair of offsets.
pub fn gp_enumerate(cc: &CircleCorrespondence, n_max: usize) -> Result<GPReport> {
    let (m, n) = cc.monomial_degrees()?;
    if n_max > GP_MAX_N {
        return Err(Error::resource(format!(
            "N = {n_max} exceeds {GP_MAX_N}: the number of line intersections grows like n^(3N)"
        )));
    }
    if m == n {
        return Ok(GPReport {
            n: n_max,
            finite: Some(false),
            points: Vec::new(),
            angles: Vec::new(),
            density: None,
            certificate: format!(
                "diagonal paths: m = n = {m}, so (z, z, ..., z) is a path of every length and GP({n_max}) = T"
            ),
        });
    }
    let d = m.gcd(&n) as i128;
    let (m, n) = (m as i128, n as i128);
    let c = |r: u32| if r == 0 { 1 } else { d.pow(r - 1) };
    let big_n = n_max as u32;
    // each pair contributes about |det| / (c_r c_s) intersections plus one
    // probe per offset k1
    let mut work: u128 = 0;
    for r in 1..=big_n {
        for s in 0..r {
            let det = n.pow(r) * m.pow(s) - n.pow(s) * m.pow(r);
            work += (det.unsigned_abs() / (c(r) * c(s)) as u128)
                + ((n.pow(r) + m.pow(r)) / c(r)) as u128;
        }
    }
    if work > GP_WORK_CAP {
        return Err(Error::resource(format!(
            "GP({n_max}) for m = {m}, n = {n} needs about {work} intersections, above {GP_WORK_CAP}"
        )));
    }
    let mut betas: BTreeSet<Ratio<i128>> = BTreeSet::new();
    for r in 1..=big_n {
        for s in 0..r {
            let (ar, br, cr) = (n.pow(r), m.pow(r), c(r));
            let (as_, bs, cs) = (n.pow(s), m.pow(s), c(s));
            let det = ar * bs - as_ * br;
            // alpha, beta in [0, 1) force u = ar beta - br alpha into (-br, ar)
            for k1 in (-br / cr - 1)..=(ar / cr) {
                let u = cr * k1;
                if u <= -br || u >= ar {
                    continue;
                }
                // beta in [0, 1) confines alpha to [-u/br, (ar - u)/br)
                let zero = Ratio::from_integer(0);
                let one = Ratio::from_integer(1);
                let a_lo = Ratio::new(-u, br).max(zero);
                let a_hi = Ratio::new(ar - u, br).min(one);
                if a_lo >= a_hi {
                    continue;
                }
                // alpha = (u as - v ar) / det, so v ar = u as - det alpha
                let num0 = u * as_;
                let step = Ratio::from_integer(cs * ar);
                let t1 = (Ratio::from_integer(num0) - a_lo * det) / step;
                let t2 = (Ratio::from_integer(num0) - a_hi * det) / step;
                let k2_lo = t1.min(t2).floor().to_integer();
                let k2_hi = t1.max(t2).ceil().to_integer();
                for k2 in k2_lo..=k2_hi {
                    let v = cs * k2;
                    let alpha = Ratio::new(num0 - v * ar, det);
                    if alpha < zero || alpha >= one {
                        continue;
                    }
                    let beta = (Ratio::from_integer(u) + alpha * br) / ar;
                    if beta >= zero && beta < one {
                        betas.insert(beta);
                    }
                }
            }
        }
    }
    let angles: Vec<Ratio<i128>> = betas.into_iter().collect();
    let points = angles
        .iter()
        .map(|b| SpherePoint::on_circle(ratio_f64(b)))
        .collect();
    Ok(GPReport {
        n: n_max,
        finite: Some(true),
        certificate: format!(
            "exact enumeration of pairwise intersections of the line families G_r, G_s, 0 <= s < r <= {n_max}, for slopes (m/n)^r with m = {m} != n = {n}: {} points",
            angles.len()
        ),
        points,
        angles,
        density: None,
    })
}

fn ratio_f64(r: &Ratio<i128>) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// How [`gp_sample`] draws starting points.
#[derive(Clone, Debug)]
pub enum JSampler {
    /// `count` points of `T` along a golden-ratio sequence.
    Circle(usize),
    /// `count` points spread over the sphere (spherical Fibonacci lattice).
    Sphere(usize),
    /// The given points.
    Points(Vec<SpherePoint>),
}

impl JSampler {
    pub fn points(&self) -> Vec<SpherePoint> {
        // golden-ratio steps avoid roots of unity, which are periodic for
        // every monomial family
        let phi = (5f64.sqrt() - 1.0) / 2.0;
        match self {
            JSampler::Circle(count) => (0..*count)
                .map(|j| SpherePoint::on_circle(((j as f64 + 1.0) * phi).fract()))
                .collect(),
            JSampler::Sphere(count) => {
                let k = *count as f64;
                (0..*count)
                    .map(|j| {
                        let zc = 1.0 - 2.0 * (j as f64 + 0.5) / k;
                        let r = (1.0 - zc * zc).max(0.0).sqrt();
                        let th = std::f64::consts::TAU * ((j as f64 + 1.0) * phi).fract();
                        crate::sphere::from_unit_vector([r * th.cos(), r * th.sin(), zc])
                    })
                    .collect()
            }
            JSampler::Points(v) => v.clone(),
        }
    }
}

/// Estimates `GP(N)` by building forward orbits of sampled `z` up to length
/// `N` and matching endpoints across lengths at chordal tolerance `1e-6`.
///
/// Reports the matched endpoints, clustered, and the fraction of samples for
/// which some pair of lengths meets. Never claims finiteness.
pub fn gp_sample(
    corr: &Correspondence,
    sampler: &JSampler,
    n_max: usize,
    tol: f64,
) -> Result<GPReport> {
    let starts = sampler.points();
    if starts.is_empty() {
        return Err(Error::invalid("no sample points"));
    }
    let mut found = PointSet::new(GP_SAMPLE_TOL);
    let mut hits = 0usize;
    for z in &starts {
        let mut levels: Vec<PointSet> = Vec::with_capacity(n_max + 1);
        let mut first = PointSet::new(GP_SAMPLE_TOL);
        first.insert(*z);
        levels.push(first);
        for _ in 0..n_max {
            let mut next = PointSet::new(GP_SAMPLE_TOL);
            for p in levels.last().expect("nonempty").points() {
                for fp in corr.forward_fiber(p, tol)?.points {
                    next.insert(fp.point);
                }
            }
            levels.push(next);
        }
        let mut hit = false;
        for r in 1..levels.len() {
            for s in 0..r {
                for w in levels[r].points() {
                    if levels[s].contains(w) {
                        hit = true;
                        found.insert(*w);
                    }
                }
            }
        }
        hits += hit as usize;
    }
    let density = hits as f64 / starts.len() as f64;
    Ok(GPReport {
        n: n_max,
        finite: None,
        points: found.sorted(),
        angles: Vec::new(),
        density: Some(density),
        certificate: format!(
            "heuristic: {hits} of {} sampled points reach a common endpoint by paths of two lengths <= {n_max}",
            starts.len()
        ),
    })
}

/// Bound `n^{3N}` on `#GP(N)`.
pub fn gp_bound(n: usize, n_max: usize) -> f64 {
    (n as f64).powi(3 * n_max as i32)
}
