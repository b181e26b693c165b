//! Resultants, bivariate gcds and the squarefree test.

use super::bivariate::BivariatePolynomial;
use super::univariate::ExactPolynomial;
use crate::error::{Error, Result};

/// `Res_z(f, g)` as a polynomial in `w`, via the Sylvester determinant.
///
/// If exactly one argument is constant in `z` the resultant is that argument's
/// coefficient raised to the other's `z`-degree. Both constant in `z` is
/// rejected.
pub fn resultant_z(f: &BivariatePolynomial, g: &BivariatePolynomial) -> Result<ExactPolynomial> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::invalid("resultant of the zero polynomial"));
    }
    let (a, b) = (f.deg_z(), g.deg_z());
    let fc = f.coefficients_in_z();
    let gc = g.coefficients_in_z();
    match (a, b) {
        (0, 0) => Err(Error::invalid(
            "resultant in z of two polynomials that are both constant in z",
        )),
        (a, 0) => Ok(gc[0].pow(a)),
        (0, b) => Ok(fc[0].pow(b)),
        (a, b) => {
            let size = a + b;
            let mut m = vec![vec![ExactPolynomial::zero(); size]; size];
            for r in 0..b {
                for k in 0..=a {
                    m[r][r + k] = fc[a - k].clone();
                }
            }
            for r in 0..a {
                for k in 0..=b {
                    m[b + r][r + k] = gc[b - k].clone();
                }
            }
            Ok(bareiss_det(m))
        }
    }
}

/// `Res_w(f, g)` as a polynomial in `z`.
pub fn resultant_w(f: &BivariatePolynomial, g: &BivariatePolynomial) -> Result<ExactPolynomial> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::invalid("resultant of the zero polynomial"));
    }
    if f.deg_w() == 0 && g.deg_w() == 0 {
        return Err(Error::invalid(
            "resultant in w of two polynomials that are both constant in w",
        ));
    }
    resultant_z(&f.transpose(), &g.transpose())
}

/// Fraction-free determinant over `Q(i)[w]`.
fn bareiss_det(mut m: Vec<Vec<ExactPolynomial>>) -> ExactPolynomial {
    let n = m.len();
    let mut negate = false;
    let mut prev = ExactPolynomial::one();
    for k in 0..n.saturating_sub(1) {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                None => return ExactPolynomial::zero(),
                Some(i) => {
                    m.swap(k, i);
                    negate = !negate;
                }
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = t.div_exact(&prev);
            }
            m[i][k] = ExactPolynomial::zero();
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        -&d
    } else {
        d
    }
}

fn content(v: &[ExactPolynomial]) -> ExactPolynomial {
    v.iter().fold(ExactPolynomial::zero(), |acc, c| acc.gcd(c))
}

fn primitive_part(v: &[ExactPolynomial]) -> Vec<ExactPolynomial> {
    let c = content(v);
    if c.is_zero() {
        return Vec::new();
    }
    let mut out: Vec<ExactPolynomial> = v.iter().map(|x| x.div_exact(&c)).collect();
    while out.last().is_some_and(|x| x.is_zero()) {
        out.pop();
    }
    out
}

/// Pseudo-remainder of `a` by `b` as polynomials in `z` over `Q(i)[w]`.
fn pseudo_rem(a: &[ExactPolynomial], b: &[ExactPolynomial]) -> Vec<ExactPolynomial> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lb = b[db].clone();
    while r.len() > db {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - db;
        for x in r.iter_mut() {
            *x = &*x * &lb;
        }
        for (k, bk) in b.iter().enumerate() {
            r[shift + k] = &r[shift + k] - &(&lr * bk);
        }
        debug_assert!(r[dr].is_zero());
        while r.last().is_some_and(|x| x.is_zero()) {
            r.pop();
        }
    }
    r
}

/// Gcd of two bivariate polynomials over `Q(i)`, normalized so that its
/// leading coefficient (highest `z` power, then highest `w` power) is `1`.
///
/// Content in `Q(i)[w]` is handled separately; the primitive parts go
/// through a primitive pseudo-remainder sequence in `z`.
pub fn gcd_bivariate(f: &BivariatePolynomial, g: &BivariatePolynomial) -> BivariatePolynomial {
    if f.is_zero() {
        return g.normalized();
    }
    if g.is_zero() {
        return f.normalized();
    }
    let fc = f.coefficients_in_z();
    let gc = g.coefficients_in_z();
    let c = content(&fc).gcd(&content(&gc));
    let mut a = primitive_part(&fc);
    let mut b = primitive_part(&gc);
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    let prim = loop {
        if b.is_empty() {
            break a;
        }
        if b.len() == 1 {
            // a primitive polynomial constant in z is a unit
            break vec![ExactPolynomial::one()];
        }
        let r = pseudo_rem(&a, &b);
        a = b;
        b = primitive_part(&r);
    };
    let prim = BivariatePolynomial::from_coefficients_in_z(&prim);
    let cpoly = BivariatePolynomial::from_coefficients_in_z(&[c]);
    prim.mul(&cpoly).normalized()
}

/// Outcome of [`squarefree_check`].
#[derive(Clone, Debug, PartialEq)]
pub struct SquarefreeReport {
    pub squarefree: bool,
    /// A nonconstant common factor of `p` and one of its partials.
    pub witness: Option<BivariatePolynomial>,
}

/// Decides whether `p` has a repeated irreducible factor.
///
/// `p` is squarefree iff `gcd(p, p_z)` and `gcd(p, p_w)` are both constant.
/// A repeated factor depending on `z` divides `p_z`; one depending only on
/// `w` divides `p_w`.
pub fn squarefree_check(p: &BivariatePolynomial) -> Result<SquarefreeReport> {
    if p.is_zero() {
        return Err(Error::invalid("the zero polynomial"));
    }
    for d in [p.partial_z(), p.partial_w()] {
        if d.is_zero() {
            continue;
        }
        let g = gcd_bivariate(p, &d);
        if !g.is_constant() {
            return Ok(SquarefreeReport {
                squarefree: false,
                witness: Some(g),
            });
        }
    }
    Ok(SquarefreeReport {
        squarefree: true,
        witness: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::scalar::gq;
    use crate::polyalg::univariate::Poly;
    use num_traits::Zero;

    fn ep(v: &[i64]) -> ExactPolynomial {
        Poly::new(v.iter().map(|&x| gq(x, 0)).collect())
    }

    fn bp(t: &[(usize, usize, i64)]) -> BivariatePolynomial {
        BivariatePolynomial::from_int_terms(t)
    }

    #[test]
    fn resultant_of_graph_and_its_derivative() {
        // p = z^2 - w, p_z = 2z: Res_z = -4w
        let p = bp(&[(2, 0, 1), (0, 1, -1)]);
        let r = resultant_z(&p, &p.partial_z()).unwrap();
        assert_eq!(r, ep(&[0, -4]));
    }

    #[test]
    fn resultant_against_constant_in_z() {
        let f = bp(&[(2, 0, 1), (0, 1, -1)]);
        let g = bp(&[(0, 1, 1), (0, 0, 2)]); // w + 2
        assert_eq!(resultant_z(&f, &g).unwrap(), ep(&[2, 1]).pow(2));
        assert!(resultant_z(&bp(&[(0, 1, 1)]), &bp(&[(0, 2, 1)])).is_err());
    }

    #[test]
    fn resultant_detects_common_root() {
        // f = z - w, g = z^2 - 1: Res_z vanishes exactly where w = +-1
        let f = bp(&[(1, 0, 1), (0, 1, -1)]);
        let g = bp(&[(2, 0, 1), (0, 0, -1)]);
        let r = resultant_z(&f, &g).unwrap();
        assert!(r.eval(&gq(1, 0)).is_zero());
        assert!(r.eval(&gq(-1, 0)).is_zero());
        assert!(!r.eval(&gq(2, 0)).is_zero());
    }

    #[test]
    fn resultant_antisymmetry_sign() {
        // Res(f, g) = (-1)^(deg f deg g) Res(g, f)
        let f = bp(&[(2, 0, 1), (1, 1, 3), (0, 0, -2)]);
        let g = bp(&[(3, 0, 1), (0, 2, 1), (1, 0, 1)]);
        let a = resultant_z(&f, &g).unwrap();
        let b = resultant_z(&g, &f).unwrap();
        assert_eq!(a, b);
        let h = bp(&[(1, 0, 1), (0, 1, 1)]);
        let c = resultant_z(&f, &h).unwrap();
        let d = resultant_z(&h, &f).unwrap();
        assert_eq!(c, d);
        let k = bp(&[(3, 0, 1), (0, 1, 1)]);
        let e = resultant_z(&h, &k).unwrap();
        let f2 = resultant_z(&k, &h).unwrap();
        assert_eq!(e, -&f2);
    }

    #[test]
    fn gcd_finds_common_factor() {
        let a = bp(&[(1, 0, 1), (0, 1, -1)]); // z - w
        let b = bp(&[(1, 1, 1), (0, 0, 1)]); // zw + 1
        let c = bp(&[(2, 0, 1), (0, 1, 3)]); // z^2 + 3w
        let g = gcd_bivariate(&a.mul(&b), &a.mul(&c));
        assert_eq!(g, a.normalized());
        assert!(gcd_bivariate(&b, &c).is_constant());
    }

    #[test]
    fn gcd_keeps_w_content() {
        let a = bp(&[(0, 1, 1), (0, 0, -2)]); // w - 2
        let b = bp(&[(1, 0, 1), (0, 1, 1)]);
        let c = bp(&[(2, 0, 1), (0, 0, 1)]);
        let g = gcd_bivariate(&a.mul(&b), &a.mul(&c));
        assert_eq!(g, a.normalized());
    }

    #[test]
    fn squarefree_examples() {
        let circle = bp(&[(2, 0, 1), (0, 2, 1), (0, 0, -1)]);
        assert!(squarefree_check(&circle).unwrap().squarefree);
        let a = bp(&[(1, 0, 1), (0, 1, -1)]);
        let r = squarefree_check(&a.mul(&a)).unwrap();
        assert!(!r.squarefree);
        assert_eq!(r.witness.unwrap(), a.normalized());
        // repeated factor only in w
        let ww = bp(&[(0, 1, 1), (0, 0, -1)]);
        let r = squarefree_check(&ww.mul(&ww).mul(&bp(&[(1, 0, 1), (0, 0, 1)]))).unwrap();
        assert!(!r.squarefree);
    }

    #[test]
    fn products_of_graphs_are_squarefree() {
        let p = BivariatePolynomial::graph_of_power(2).mul(&BivariatePolynomial::graph_of_power(3));
        assert!(squarefree_check(&p).unwrap().squarefree);
    }
}
