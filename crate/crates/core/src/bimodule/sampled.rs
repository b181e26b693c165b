//! Functions on `C_p` and on path spaces `P_n`, sampled over a grid of
//! endpoints `w`.

use crate::correspondence::{Correspondence, Restriction};
use crate::dynamics::PathSample;
use crate::error::{Error, Result};
use crate::sphere::{from_unit_vector, SpherePoint};
use num_complex::Complex64;
use std::sync::Arc;

/// Default number of grid points.
pub const DEFAULT_GRID: usize = 512;

type PathFn = dyn Fn(&[SpherePoint]) -> Complex64 + Send + Sync;

/// A closed-form function on paths `(z_1, ..., z_{n+1})`.
///
/// Length 0 is a function on the base `J` (an element of `A`), length 1 a
/// function on `C_p` (an element of `X`), length `n` an element of `C(P_n)`.
#[derive(Clone)]
pub struct PathFunction {
    len: usize,
    f: Arc<PathFn>,
}

impl std::fmt::Debug for PathFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "PathFunction(len = {})", self.len)
    }
}

impl PathFunction {
    pub fn new(
        len: usize,
        f: impl Fn(&[SpherePoint]) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        PathFunction {
            len,
            f: Arc::new(f),
        }
    }

    pub fn constant(len: usize, c: Complex64) -> Self {
        Self::new(len, move |_| c)
    }

    /// `a(z)` on `J`. Infinity evaluates to `NaN`.
    pub fn on_base(a: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static) -> Self {
        Self::new(0, move |p| p[0].affine().map_or(nan(), &a))
    }

    /// `f(z, w)` on `C_p`. Points at infinity evaluate to `NaN`.
    pub fn on_edges(f: impl Fn(Complex64, Complex64) -> Complex64 + Send + Sync + 'static) -> Self {
        Self::new(1, move |p| match (p[0].affine(), p[1].affine()) {
            (Some(z), Some(w)) => f(z, w),
            _ => nan(),
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn eval(&self, path: &[SpherePoint]) -> Complex64 {
        debug_assert_eq!(path.len(), self.len + 1);
        (self.f)(path)
    }

    /// `(f ⊗ g)(z_1, ..., z_{a+b+1}) = f(z_1, ..., z_{a+1}) g(z_{a+1}, ..., z_{a+b+1})`.
    pub fn tensor(&self, other: &PathFunction) -> PathFunction {
        let (f, g, a) = (self.f.clone(), other.f.clone(), self.len);
        Self::new(self.len + other.len, move |p| f(&p[..=a]) * g(&p[a..]))
    }

    /// `a . f . b`: `a(z_1) f(z_1, ..., z_{n+1}) b(z_{n+1})`.
    pub fn act(&self, a: Option<&PathFunction>, b: Option<&PathFunction>) -> Result<PathFunction> {
        for x in [a, b].into_iter().flatten() {
            if x.len != 0 {
                return Err(Error::invalid("actions need functions on the base"));
            }
        }
        let f = self.f.clone();
        let a = a.map(|x| x.f.clone());
        let b = b.map(|x| x.f.clone());
        Ok(Self::new(self.len, move |p| {
            let first = std::slice::from_ref(&p[0]);
            let last = std::slice::from_ref(&p[p.len() - 1]);
            let mut v = f(p);
            if let Some(a) = &a {
                v *= a(first);
            }
            if let Some(b) = &b {
                v *= b(last);
            }
            v
        }))
    }

    pub fn scale(&self, c: Complex64) -> PathFunction {
        let f = self.f.clone();
        Self::new(self.len, move |p| c * f(p))
    }

    pub fn add(&self, other: &PathFunction) -> Result<PathFunction> {
        if self.len != other.len {
            return Err(Error::invalid(
                "added functions live on different path spaces",
            ));
        }
        let (f, g) = (self.f.clone(), other.f.clone());
        Ok(Self::new(self.len, move |p| f(p) + g(p)))
    }
}

fn nan() -> Complex64 {
    Complex64::new(f64::NAN, f64::NAN)
}

/// `u_i(z, w) = z^i / sqrt(m)` for `i = 0..m`.
pub fn monomial_basis(m: usize) -> Vec<PathFunction> {
    let s = (m as f64).sqrt();
    (0..m)
        .map(|i| PathFunction::on_edges(move |z, _| z.powu(i as u32) / s))
        .collect()
}

/// Deterministic sample points for `J`.
#[derive(Clone, Debug)]
pub enum SampleGrid {
    /// `count` equispaced points `e^{2 pi i k / count}` of `T`.
    Circle(usize),
    /// `count` spherical Fibonacci points.
    Sphere(usize),
    Points(Vec<SpherePoint>),
}

impl Default for SampleGrid {
    fn default() -> Self {
        SampleGrid::Circle(DEFAULT_GRID)
    }
}

impl SampleGrid {
    pub fn points(&self) -> Vec<SpherePoint> {
        match self {
            SampleGrid::Circle(n) => (0..*n)
                .map(|k| SpherePoint::on_circle(k as f64 / *n as f64))
                .collect(),
            SampleGrid::Sphere(n) => {
                let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
                (0..*n)
                    .map(|k| {
                        let z = 1.0 - 2.0 * (k as f64 + 0.5) / *n as f64;
                        let r = (1.0 - z * z).max(0.0).sqrt();
                        let t = golden * k as f64;
                        from_unit_vector([r * t.cos(), r * t.sin(), z])
                    })
                    .collect()
            }
            SampleGrid::Points(v) => v.clone(),
        }
    }

    /// The matching restriction for branched sets.
    pub fn restriction(&self) -> Restriction {
        match self {
            SampleGrid::Circle(_) => Restriction::UnitCircle,
            SampleGrid::Sphere(_) => Restriction::None,
            SampleGrid::Points(v) => Restriction::Points(v.clone()),
        }
    }
}

/// Paths of a fixed length grouped by their endpoint `w`.
#[derive(Clone, Debug)]
pub struct PathCell {
    pub w: SpherePoint,
    pub paths: Vec<PathSample>,
}

/// All paths of length `len` ending at each grid point.
#[derive(Clone, Debug)]
pub struct PathGrid {
    pub len: usize,
    pub cells: Vec<PathCell>,
}

impl PathGrid {
    pub fn new(corr: &Correspondence, ws: &[SpherePoint], len: usize, tol: f64) -> Result<Self> {
        let cells = ws
            .iter()
            .map(|w| {
                Ok(PathCell {
                    w: *w,
                    paths: paths_ending_at(corr, w, len, tol)?,
                })
            })
            .collect::<Result<_>>()?;
        Ok(PathGrid { len, cells })
    }

    pub fn sample(&self, f: &PathFunction) -> Result<SampledFunction> {
        if f.len != self.len {
            return Err(Error::invalid(format!(
                "function on paths of length {} sampled on length {}",
                f.len, self.len
            )));
        }
        Ok(SampledFunction {
            len: self.len,
            values: self
                .cells
                .iter()
                .map(|c| c.paths.iter().map(|p| f.eval(&p.points)).collect())
                .collect(),
        })
    }

    /// `(f|g)_A(w)` at every grid point.
    pub fn inner(&self, f: &SampledFunction, g: &SampledFunction) -> Result<Vec<Complex64>> {
        if f.values.len() != self.cells.len() || g.values.len() != self.cells.len() {
            return Err(Error::invalid("sampled functions do not match the grid"));
        }
        Ok(self
            .cells
            .iter()
            .zip(f.values.iter().zip(&g.values))
            .map(|(c, (fv, gv))| {
                c.paths
                    .iter()
                    .zip(fv.iter().zip(gv))
                    .map(|(p, (a, b))| p.weight as f64 * a.conj() * b)
                    .sum()
            })
            .collect())
    }

    /// `||f||_2 = sup_w |(f|f)_A(w)|^{1/2}` over the grid.
    pub fn norm2(&self, f: &SampledFunction) -> Result<f64> {
        Ok(self
            .inner(f, f)?
            .iter()
            .map(|v| v.re)
            .fold(0.0, f64::max)
            .sqrt())
    }
}

/// Values of a [`PathFunction`] on a [`PathGrid`].
#[derive(Clone, Debug, PartialEq)]
pub struct SampledFunction {
    pub len: usize,
    /// Per grid point, one value per path in the cell.
    pub values: Vec<Vec<Complex64>>,
}

impl SampledFunction {
    /// Largest modulus over all sampled paths.
    pub fn norm_inf(&self) -> f64 {
        self.values
            .iter()
            .flatten()
            .map(|v| v.norm())
            .fold(0.0, f64::max)
    }
}

/// Paths `(z_1, ..., z_n, w)` built from backward fibers, with weights.
pub fn paths_ending_at(
    corr: &Correspondence,
    w: &SpherePoint,
    len: usize,
    tol: f64,
) -> Result<Vec<PathSample>> {
    // built reversed, then flipped
    let mut rev: Vec<(Vec<SpherePoint>, u64)> = vec![(vec![*w], 1)];
    for _ in 0..len {
        let mut next = Vec::new();
        for (pts, wt) in &rev {
            let head = *pts.last().expect("nonempty");
            for fp in corr.backward_fiber(&head, tol)?.points {
                let mut p = pts.clone();
                p.push(fp.point);
                next.push((p, wt * fp.multiplicity as u64));
            }
        }
        rev = next;
    }
    Ok(rev
        .into_iter()
        .map(|(mut pts, weight)| {
            pts.reverse();
            PathSample {
                points: pts,
                weight,
            }
        })
        .collect())
}

/// `(f|g)_A(w)`: the weighted sum over paths of length `f.len()` ending at `w`.
pub fn inner_product(
    corr: &Correspondence,
    f: &PathFunction,
    g: &PathFunction,
    w: &SpherePoint,
    tol: f64,
) -> Result<Complex64> {
    if f.len != g.len {
        return Err(Error::invalid(
            "inner product of functions on different path spaces",
        ));
    }
    Ok(paths_ending_at(corr, w, f.len, tol)?
        .iter()
        .map(|p| p.weight as f64 * f.eval(&p.points).conj() * g.eval(&p.points))
        .sum())
}

/// `||f - sum_i u_i (u_i|f)_A||_inf` over the grid.
pub fn reconstruction_error(
    grid: &PathGrid,
    basis: &[PathFunction],
    f: &PathFunction,
) -> Result<f64> {
    let fs = grid.sample(f)?;
    let mut recon: Vec<Vec<Complex64>> = fs
        .values
        .iter()
        .map(|c| vec![Complex64::default(); c.len()])
        .collect();
    for u in basis {
        let us = grid.sample(u)?;
        let coef = grid.inner(&us, &fs)?;
        for ((r, uv), c) in recon.iter_mut().zip(&us.values).zip(&coef) {
            for (x, y) in r.iter_mut().zip(uv) {
                *x += y * c;
            }
        }
    }
    Ok(recon
        .iter()
        .flatten()
        .zip(fs.values.iter().flatten())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max))
}

/// Compares `(f_1 ⊗ ... ⊗ f_n | g_1 ⊗ ... ⊗ g_n)_A(w)` computed two ways: by
/// the recursion `(f_n | (f_1 ⊗ ... | g_1 ⊗ ...)_A g_n)_A` over fibers, and
/// by the direct sum over `P_n` with path weights. Returns the largest
/// absolute deviation over `ws`.
pub fn tensor_isometry_check(
    corr: &Correspondence,
    fs: &[PathFunction],
    gs: &[PathFunction],
    ws: &[SpherePoint],
    tol: f64,
) -> Result<f64> {
    if fs.is_empty() || fs.len() != gs.len() || fs.len() > 3 {
        return Err(Error::invalid(
            "need two lists of 1 to 3 functions of equal length",
        ));
    }
    if fs.iter().chain(gs).any(|f| f.len != 1) {
        return Err(Error::invalid("tensor factors must be functions on C_p"));
    }
    let tf = fs[1..].iter().fold(fs[0].clone(), |acc, f| acc.tensor(f));
    let tg = gs[1..].iter().fold(gs[0].clone(), |acc, g| acc.tensor(g));
    let mut worst: f64 = 0.0;
    for w in ws {
        let direct = inner_product(corr, &tf, &tg, w, tol)?;
        let rec = recursive_inner(corr, fs, gs, w, tol)?;
        worst = worst.max((direct - rec).norm());
    }
    Ok(worst)
}

fn recursive_inner(
    corr: &Correspondence,
    fs: &[PathFunction],
    gs: &[PathFunction],
    w: &SpherePoint,
    tol: f64,
) -> Result<Complex64> {
    let k = fs.len() - 1;
    let mut acc = Complex64::default();
    for fp in corr.backward_fiber(w, tol)?.points {
        let edge = [fp.point, *w];
        let inner = if k == 0 {
            Complex64::new(1.0, 0.0)
        } else {
            recursive_inner(corr, &fs[..k], &gs[..k], &fp.point, tol)?
        };
        acc += fp.multiplicity as f64 * fs[k].eval(&edge).conj() * inner * gs[k].eval(&edge);
    }
    Ok(acc)
}

/// Outcome of [`ideal_membership`].
#[derive(Clone, Debug)]
pub struct IdealReport {
    pub member: bool,
    /// `B(p)` inside `J`, where `a` was tested.
    pub branched: Vec<SpherePoint>,
    /// A branched point where `|a| >= tol`.
    pub witness: Option<SpherePoint>,
}

/// Whether `a` lies in `{a in C(J) : a = 0 on B(p)}`, i.e. `|a| < tol` on
/// every branched point of `p` inside `J`.
pub fn ideal_membership(
    corr: &Correspondence,
    a: &PathFunction,
    j: &Restriction,
    tol: f64,
) -> Result<IdealReport> {
    if a.len != 0 {
        return Err(Error::invalid("ideal membership needs a function on J"));
    }
    let branched = corr.branched_sets(j)?.b;
    let witness = branched
        .iter()
        // NaN values count as nonzero
        .find(|z| {
            a.eval(std::slice::from_ref(*z)).norm().partial_cmp(&tol)
                != Some(std::cmp::Ordering::Less)
        })
        .copied();
    Ok(IdealReport {
        member: witness.is_none(),
        branched,
        witness,
    })
}
