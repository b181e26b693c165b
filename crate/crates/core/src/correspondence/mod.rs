//! The correspondence `C_p = {(z, w) : p~(z, w) = 0}` on the sphere.
//!
//! Fibers are computed by fixing one variable in the bihomogeneous form and
//! finding the roots of the remaining binary form, so points at infinity need
//! no special casing.

mod branched;

pub use crate::sphere::{Chart, SpherePoint};
pub use branched::{BranchedSets, Restriction};

use crate::error::{Error, Result};
use crate::polyalg::{
    projective_roots, squarefree_check, BihomogeneousPolynomial, BivariatePolynomial, ChartPolicy,
    ExactPolynomial,
};
use num_complex::Complex64;
use serde::Serialize;

/// Numerical tolerances, all in the chordal metric except `on_curve`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    /// Bound on `|p~(z, w)|` at normalized coordinates.
    pub on_curve: f64,
    /// Root clustering radius.
    pub cluster: f64,
    /// Membership radius when restricting branched sets.
    pub restrict: f64,
    /// Radius for identifying a given point with a computed fiber point.
    pub matching: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            on_curve: 1e-9,
            cluster: 1e-6,
            restrict: 1e-7,
            matching: 1e-5,
        }
    }
}

/// A fiber point with its multiplicity.
#[derive(Clone, Debug, PartialEq)]
pub struct FiberPoint {
    pub point: SpherePoint,
    pub multiplicity: usize,
    /// Spread of the merged root approximations.
    pub radius: f64,
}

/// All solutions over a base point, with multiplicities.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedFiber {
    pub base: SpherePoint,
    pub points: Vec<FiberPoint>,
}

impl WeightedFiber {
    pub fn total_multiplicity(&self) -> usize {
        self.points.iter().map(|p| p.multiplicity).sum()
    }

    /// The fiber point nearest to `q`, if within `tol`.
    pub fn find(&self, q: &SpherePoint, tol: f64) -> Option<&FiberPoint> {
        self.points
            .iter()
            .map(|p| (p.point.chordal_distance(q), p))
            .filter(|(d, _)| *d <= tol)
            .min_by(|a, b| a.0.total_cmp(&b.0))
            .map(|(_, p)| p)
    }
}

/// A squarefree polynomial `p(z, w)` of bidegree `(m, n)`, `m, n >= 1`.
#[derive(Clone, Debug)]
pub struct Correspondence {
    p: BivariatePolynomial,
    bihom: BihomogeneousPolynomial,
    factors: Option<Vec<BivariatePolynomial>>,
    tol: Tolerances,
}

impl Correspondence {
    /// Validates `p`: both degrees positive, squarefree, and no factor that
    /// depends on only one variable (such a factor would make a whole
    /// vertical or horizontal line part of `C_p`).
    pub fn new(p: BivariatePolynomial) -> Result<Self> {
        if p.is_zero() {
            return Err(Error::invalid("the zero polynomial"));
        }
        if p.deg_z() == 0 || p.deg_w() == 0 {
            return Err(Error::invalid(format!(
                "need degree at least 1 in both variables, got (deg_z, deg_w) = ({}, {})",
                p.deg_z(),
                p.deg_w()
            )));
        }
        let sf = squarefree_check(&p)?;
        if !sf.squarefree {
            let w = sf.witness.map(|w| w.display()).unwrap_or_default();
            return Err(Error::invalid(format!(
                "polynomial is not squarefree; repeated factor {w}"
            )));
        }
        if let Some(f) = one_variable_factor(&p) {
            return Err(Error::invalid(format!(
                "polynomial has the factor {} in a single variable",
                f.display()
            )));
        }
        let bihom = BihomogeneousPolynomial::new(&p);
        Ok(Correspondence {
            p,
            bihom,
            factors: None,
            tol: Tolerances::default(),
        })
    }

    /// Builds `p` as the product of `factors` and keeps the factorization.
    pub fn from_factors(factors: Vec<BivariatePolynomial>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::invalid("empty factor list"));
        }
        if let Some(f) = factors.iter().find(|f| f.is_zero() || f.is_constant()) {
            return Err(Error::invalid(format!("trivial factor {}", f.display())));
        }
        let p = factors
            .iter()
            .skip(1)
            .fold(factors[0].clone(), |acc, f| acc.mul(f));
        let mut c = Self::new(p)?;
        c.factors = Some(factors);
        Ok(c)
    }

    /// `w - z^{m_1}` times ... times `w - z^{m_r}` for distinct exponents.
    pub fn product_of_powers(exponents: &[usize]) -> Result<Self> {
        let mut seen = exponents.to_vec();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != exponents.len() {
            return Err(Error::invalid("exponents must be distinct"));
        }
        if exponents.contains(&0) {
            return Err(Error::invalid("exponents must be at least 1"));
        }
        Self::from_factors(
            exponents
                .iter()
                .map(|&m| BivariatePolynomial::graph_of_power(m))
                .collect(),
        )
    }

    /// `z^m - w^n`.
    pub fn monomial(m: usize, n: usize) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::invalid("m and n must be at least 1"));
        }
        Self::new(BivariatePolynomial::monomial_relation(m, n))
    }

    pub fn with_tolerances(mut self, tol: Tolerances) -> Self {
        self.tol = tol;
        self
    }

    pub fn tolerances(&self) -> Tolerances {
        self.tol
    }

    pub fn polynomial(&self) -> &BivariatePolynomial {
        &self.p
    }

    pub fn bihomogeneous(&self) -> &BihomogeneousPolynomial {
        &self.bihom
    }

    pub fn factors(&self) -> Option<&[BivariatePolynomial]> {
        self.factors.as_deref()
    }

    /// Degree in `z`, the size of backward fibers.
    pub fn deg_z(&self) -> usize {
        self.p.deg_z()
    }

    /// Degree in `w`, the size of forward fibers.
    pub fn deg_w(&self) -> usize {
        self.p.deg_w()
    }

    /// The correspondence of `p(w, z)`.
    pub fn transposed(&self) -> Correspondence {
        let p = self.p.transpose();
        Correspondence {
            bihom: BihomogeneousPolynomial::new(&p),
            p,
            factors: self
                .factors
                .as_ref()
                .map(|f| f.iter().map(|g| g.transpose()).collect()),
            tol: self.tol,
        }
    }

    /// All `z` with `p(z, w) = 0`, multiplicities summing to `deg_z`.
    pub fn backward_fiber(&self, w: &SpherePoint, tol: f64) -> Result<WeightedFiber> {
        self.backward_fiber_with(w, tol, ChartPolicy::Auto)
    }

    pub fn backward_fiber_with(
        &self,
        w: &SpherePoint,
        tol: f64,
        policy: ChartPolicy,
    ) -> Result<WeightedFiber> {
        let (w1, w2) = w.coords();
        fiber(*w, &self.bihom.z_form(w1, w2), tol, policy)
    }

    /// All `w` with `p(z, w) = 0`, multiplicities in `w` summing to `deg_w`.
    pub fn forward_fiber(&self, z: &SpherePoint, tol: f64) -> Result<WeightedFiber> {
        self.forward_fiber_with(z, tol, ChartPolicy::Auto)
    }

    pub fn forward_fiber_with(
        &self,
        z: &SpherePoint,
        tol: f64,
        policy: ChartPolicy,
    ) -> Result<WeightedFiber> {
        let (z1, z2) = z.coords();
        fiber(*z, &self.bihom.w_form(z1, z2), tol, policy)
    }

    /// The branch index `e(z, w)`: the multiplicity of `z` as a root of
    /// `p(., w)`.
    pub fn branch_index(&self, z: &SpherePoint, w: &SpherePoint) -> Result<usize> {
        let fib = self.backward_fiber(w, self.tol.cluster)?;
        fib.find(z, self.tol.matching)
            .map(|p| p.multiplicity)
            .ok_or_else(|| Error::invalid(format!("({z}, {w}) is not on the correspondence")))
    }

    /// `|p~(z, w)| < tol` at normalized coordinates.
    pub fn on_correspondence(&self, z: &SpherePoint, w: &SpherePoint, tol: f64) -> bool {
        let (z1, z2) = z.coords();
        let (w1, w2) = w.coords();
        self.bihom.eval(z1, z2, w1, w2).norm() < tol
    }

    /// Evaluates the affine polynomial; `None` if a coordinate is infinite.
    pub fn eval(&self, z: &SpherePoint, w: &SpherePoint) -> Option<Complex64> {
        Some(self.p.eval(z.affine()?, w.affine()?))
    }
}

fn fiber(
    base: SpherePoint,
    form: &[Complex64],
    tol: f64,
    policy: ChartPolicy,
) -> Result<WeightedFiber> {
    let roots = projective_roots(form, tol, policy)?;
    Ok(WeightedFiber {
        base,
        points: roots
            .into_iter()
            .map(|r| FiberPoint {
                point: r.point,
                multiplicity: r.multiplicity,
                radius: r.radius,
            })
            .collect(),
    })
}

/// A nonconstant factor of `p` that depends on `z` only or on `w` only.
fn one_variable_factor(p: &BivariatePolynomial) -> Option<BivariatePolynomial> {
    let content = |q: &BivariatePolynomial| -> ExactPolynomial {
        q.coefficients_in_z()
            .iter()
            .fold(ExactPolynomial::zero(), |acc, c| acc.gcd(c))
    };
    let cw = content(p);
    if !cw.is_constant() {
        return Some(BivariatePolynomial::from_grid(vec![cw.coeffs().to_vec()]));
    }
    let cz = content(&p.transpose());
    if !cz.is_constant() {
        return Some(BivariatePolynomial::from_grid(vec![cz.coeffs().to_vec()]).transpose());
    }
    None
}
