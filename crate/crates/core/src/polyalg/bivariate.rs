//! Polynomials in two variables `z`, `w` and their bihomogenization.

use super::scalar::{gq, gq_to_c64, Coefficient, GaussianRational};
use super::univariate::{ExactPolynomial, Poly, UnivariatePolynomial};
use num_complex::Complex64;
use num_traits::Zero;

/// `p(z, w) = sum c[i][j] z^i w^j` with exact coefficients.
///
/// The grid is trimmed so that `deg_z` and `deg_w` are the true partial
/// degrees. The zero polynomial has an empty grid.
#[derive(Clone, Debug, PartialEq)]
pub struct BivariatePolynomial {
    c: Vec<Vec<GaussianRational>>,
}

impl BivariatePolynomial {
    /// `grid[i][j]` is the coefficient of `z^i w^j`. Ragged rows are padded.
    pub fn from_grid(grid: Vec<Vec<GaussianRational>>) -> Self {
        let width = grid.iter().map(|r| r.len()).max().unwrap_or(0);
        let mut c: Vec<Vec<GaussianRational>> = grid
            .into_iter()
            .map(|mut r| {
                r.resize(width, GaussianRational::zero());
                r
            })
            .collect();
        while c.last().is_some_and(|r| r.iter().all(|x| x.is_zero())) {
            c.pop();
        }
        let dw = c
            .iter()
            .filter_map(|r| r.iter().rposition(|x| !x.is_zero()))
            .max();
        match dw {
            None => c.clear(),
            Some(d) => c.iter_mut().for_each(|r| r.truncate(d + 1)),
        }
        BivariatePolynomial { c }
    }

    /// Builds from `(i, j, coefficient)` terms; repeated monomials add up.
    pub fn from_terms(terms: &[(usize, usize, GaussianRational)]) -> Self {
        let dz = terms.iter().map(|t| t.0).max().unwrap_or(0);
        let dw = terms.iter().map(|t| t.1).max().unwrap_or(0);
        let mut g = vec![vec![GaussianRational::zero(); dw + 1]; dz + 1];
        for (i, j, v) in terms {
            g[*i][*j] = g[*i][*j].clone() + v.clone();
        }
        Self::from_grid(g)
    }

    /// Integer coefficients, convenient for tests and fixtures.
    pub fn from_int_terms(terms: &[(usize, usize, i64)]) -> Self {
        let t: Vec<_> = terms.iter().map(|&(i, j, v)| (i, j, gq(v, 0))).collect();
        Self::from_terms(&t)
    }

    /// `w - z^m`.
    pub fn graph_of_power(m: usize) -> Self {
        Self::from_int_terms(&[(0, 1, 1), (m, 0, -1)])
    }

    /// `z^m - w^n`.
    pub fn monomial_relation(m: usize, n: usize) -> Self {
        Self::from_int_terms(&[(m, 0, 1), (0, n, -1)])
    }

    pub fn zero() -> Self {
        BivariatePolynomial { c: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn deg_z(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn deg_w(&self) -> usize {
        self.c.first().map_or(0, |r| r.len().saturating_sub(1))
    }

    /// True for nonzero constants.
    pub fn is_constant(&self) -> bool {
        !self.is_zero() && self.deg_z() == 0 && self.deg_w() == 0
    }

    pub fn coeff(&self, i: usize, j: usize) -> GaussianRational {
        self.c
            .get(i)
            .and_then(|r| r.get(j))
            .cloned()
            .unwrap_or_else(GaussianRational::zero)
    }

    pub fn grid(&self) -> &[Vec<GaussianRational>] {
        &self.c
    }

    /// Swaps the roles of `z` and `w`.
    pub fn transpose(&self) -> Self {
        let (dz, dw) = (self.deg_z(), self.deg_w());
        if self.is_zero() {
            return Self::zero();
        }
        Self::from_grid(
            (0..=dw)
                .map(|j| (0..=dz).map(|i| self.c[i][j].clone()).collect())
                .collect(),
        )
    }

    pub fn partial_z(&self) -> Self {
        Self::from_grid(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, r)| r.iter().map(|x| x.clone() * gq(i as i64, 0)).collect())
                .collect(),
        )
    }

    pub fn partial_w(&self) -> Self {
        self.transpose().partial_z().transpose()
    }

    pub fn add(&self, other: &Self) -> Self {
        let dz = self.c.len().max(other.c.len());
        let dw = self.deg_w().max(other.deg_w()) + 1;
        Self::from_grid(
            (0..dz)
                .map(|i| {
                    (0..dw)
                        .map(|j| self.coeff(i, j) + other.coeff(i, j))
                        .collect()
                })
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        Self::from_grid(
            self.c
                .iter()
                .map(|r| r.iter().map(|x| -x.clone()).collect())
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let (dz, dw) = (self.deg_z() + other.deg_z(), self.deg_w() + other.deg_w());
        let mut g = vec![vec![GaussianRational::zero(); dw + 1]; dz + 1];
        for (i, r) in self.c.iter().enumerate() {
            for (j, a) in r.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (k, s) in other.c.iter().enumerate() {
                    for (l, b) in s.iter().enumerate() {
                        g[i + k][j + l] = g[i + k][j + l].clone() + a.clone() * b.clone();
                    }
                }
            }
        }
        Self::from_grid(g)
    }

    pub fn scale(&self, s: &GaussianRational) -> Self {
        Self::from_grid(
            self.c
                .iter()
                .map(|r| r.iter().map(|x| x.clone() * s.clone()).collect())
                .collect(),
        )
    }

    pub fn eval(&self, z: Complex64, w: Complex64) -> Complex64 {
        let mut acc = Complex64::zero();
        for r in self.c.iter().rev() {
            let mut row = Complex64::zero();
            for x in r.iter().rev() {
                row = row * w + gq_to_c64(x);
            }
            acc = acc * z + row;
        }
        acc
    }

    /// As a polynomial in `z` whose coefficients are polynomials in `w`.
    pub fn coefficients_in_z(&self) -> Vec<ExactPolynomial> {
        self.c.iter().map(|r| Poly::new(r.clone())).collect()
    }

    /// Inverse of [`Self::coefficients_in_z`].
    pub fn from_coefficients_in_z(v: &[ExactPolynomial]) -> Self {
        Self::from_grid(v.iter().map(|p| p.coeffs().to_vec()).collect())
    }

    /// The polynomial in `z` obtained by fixing `w`.
    pub fn specialize_w(&self, w: Complex64) -> UnivariatePolynomial {
        Poly::new(
            self.coefficients_in_z()
                .iter()
                .map(|a| a.to_c64().eval(&w))
                .collect(),
        )
    }

    /// Total degree of the highest nonzero monomial.
    pub fn total_degree(&self) -> usize {
        let mut d = 0;
        for (i, r) in self.c.iter().enumerate() {
            for (j, x) in r.iter().enumerate() {
                if !x.is_zero() {
                    d = d.max(i + j);
                }
            }
        }
        d
    }

    /// Divides by the leading coefficient in the order `(deg_z, then deg_w)`.
    pub fn normalized(&self) -> Self {
        match self
            .c
            .last()
            .and_then(|r| r.iter().rev().find(|x| !x.is_zero()))
        {
            None => self.clone(),
            Some(l) => {
                let inv = GaussianRational::new(num_traits::One::one(), Zero::zero()) / l.clone();
                self.scale(&inv)
            }
        }
    }

    /// Human-readable rendering such as `w - z^2`.
    pub fn display(&self) -> String {
        let mut parts = Vec::new();
        for (i, r) in self.c.iter().enumerate().rev() {
            for (j, x) in r.iter().enumerate().rev() {
                if x.is_zero() {
                    continue;
                }
                let mono = match (i, j) {
                    (0, 0) => String::new(),
                    (i, 0) => var("z", i),
                    (0, j) => var("w", j),
                    (i, j) => format!("{}*{}", var("z", i), var("w", j)),
                };
                parts.push(term(x, &mono));
            }
        }
        if parts.is_empty() {
            return "0".into();
        }
        let mut s = parts[0].clone();
        for p in &parts[1..] {
            if let Some(rest) = p.strip_prefix('-') {
                s.push_str(" - ");
                s.push_str(rest);
            } else {
                s.push_str(" + ");
                s.push_str(p);
            }
        }
        s
    }
}

fn var(name: &str, k: usize) -> String {
    if k == 1 {
        name.to_string()
    } else {
        format!("{name}^{k}")
    }
}

fn term(x: &GaussianRational, mono: &str) -> String {
    use num_traits::One;
    let coeff = if x.im.is_zero() {
        if mono.is_empty() {
            return x.re.to_string();
        }
        if x.re.is_one() {
            return mono.to_string();
        }
        if (-x.re.clone()).is_one() {
            return format!("-{mono}");
        }
        x.re.to_string()
    } else {
        format!("({}{:+}i)", x.re, x.im).replace("+-", "-")
    };
    if mono.is_empty() {
        coeff
    } else {
        format!("{coeff}*{mono}")
    }
}

/// `p~(z1, z2, w1, w2) = z2^m w2^n p(z1/z2, w1/w2)` of bidegree `(m, n)`.
///
/// Holds floating point copies of the coefficients for evaluation.
#[derive(Clone, Debug)]
pub struct BihomogeneousPolynomial {
    m: usize,
    n: usize,
    c: Vec<Vec<Complex64>>,
}

impl BihomogeneousPolynomial {
    pub fn new(p: &BivariatePolynomial) -> Self {
        let (m, n) = (p.deg_z(), p.deg_w());
        let c = (0..=m)
            .map(|i| (0..=n).map(|j| p.coeff(i, j).to_c64()).collect())
            .collect();
        BihomogeneousPolynomial { m, n, c }
    }

    pub fn bidegree(&self) -> (usize, usize) {
        (self.m, self.n)
    }

    pub fn eval(&self, z1: Complex64, z2: Complex64, w1: Complex64, w2: Complex64) -> Complex64 {
        let zf = self.z_form(w1, w2);
        let mut acc = Complex64::zero();
        for (i, a) in zf.iter().enumerate() {
            acc += a * z1.powu(i as u32) * z2.powu((self.m - i) as u32);
        }
        acc
    }

    /// Coefficients `a_i` of the binary form `sum a_i z1^i z2^(m-i)` obtained
    /// by fixing `[w1 : w2]`.
    pub fn z_form(&self, w1: Complex64, w2: Complex64) -> Vec<Complex64> {
        let pw1: Vec<Complex64> = (0..=self.n).map(|j| w1.powu(j as u32)).collect();
        let pw2: Vec<Complex64> = (0..=self.n).map(|j| w2.powu(j as u32)).collect();
        self.c
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .map(|(j, c)| c * pw1[j] * pw2[self.n - j])
                    .sum()
            })
            .collect()
    }

    /// Coefficients `b_j` of `sum b_j w1^j w2^(n-j)` obtained by fixing `[z1 : z2]`.
    pub fn w_form(&self, z1: Complex64, z2: Complex64) -> Vec<Complex64> {
        let pz1: Vec<Complex64> = (0..=self.m).map(|i| z1.powu(i as u32)).collect();
        let pz2: Vec<Complex64> = (0..=self.m).map(|i| z2.powu(i as u32)).collect();
        (0..=self.n)
            .map(|j| {
                (0..=self.m)
                    .map(|i| self.c[i][j] * pz1[i] * pz2[self.m - i])
                    .sum()
            })
            .collect()
    }

    /// Sum of coefficient moduli, used to scale residual tests.
    pub fn coefficient_mass(&self) -> f64 {
        self.c.iter().flatten().map(|x| x.norm()).sum()
    }
}
