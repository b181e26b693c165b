//! Polynomial specs, point sets and rational numbers from files and flags.

use anyhow::{Context, Result};
use clap::{Args, ValueEnum};
use corrdyn_core::dynamics::CircleCorrespondence;
use corrdyn_core::polyalg::{gq_from_f64, GaussianRational};
use corrdyn_core::{BivariatePolynomial, Correspondence, Error, SpherePoint};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::path::{Path, PathBuf};

pub fn invalid(msg: impl Into<String>) -> anyhow::Error {
    Error::InvalidInput(msg.into()).into()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Monomial,
    Product,
    Relations,
}

/// Where the polynomial comes from: a JSON spec file or a family shorthand.
#[derive(Clone, Debug, Default, Args, Serialize)]
pub struct SpecArgs {
    /// JSON polynomial spec (`-` reads stdin)
    #[arg(long, value_name = "FILE", conflicts_with = "family")]
    pub spec: Option<PathBuf>,
    /// Circle family shorthand
    #[arg(long, value_enum)]
    pub family: Option<Family>,
    /// Exponent of z for the monomial family `z^m - w^n`
    #[arg(long)]
    pub m: Option<usize>,
    /// Exponent of w for the monomial family
    #[arg(long)]
    pub n: Option<usize>,
    /// Exponents of the product family, e.g. `2,3`
    #[arg(long, value_delimiter = ',')]
    pub exponents: Vec<usize>,
    /// Factors `z^i - w^j` of the relations family, e.g. `2:3,3:2`
    #[arg(long, value_delimiter = ',')]
    pub pairs: Vec<String>,
}

/// A coefficient: `[re, im]` or a bare real number.
#[derive(Deserialize)]
#[serde(untagged)]
enum RawCoeff {
    Pair([f64; 2]),
    Real(f64),
}

type RawGrid = Vec<Vec<RawCoeff>>;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    coeffs: Option<RawGrid>,
    factors: Option<Vec<RawGrid>>,
    family: Option<Family>,
    m: Option<usize>,
    n: Option<usize>,
    exponents: Option<Vec<usize>>,
    pairs: Option<Vec<(usize, usize)>>,
}

/// A parsed polynomial with its circle family, if it came from one.
pub struct Input {
    pub corr: Correspondence,
    pub circle: Option<CircleCorrespondence>,
}

impl Input {
    pub fn circle(&self) -> Result<&CircleCorrespondence> {
        self.circle.as_ref().ok_or_else(|| {
            invalid("this command needs a circle family (--family or a family spec)")
        })
    }

    /// Echo of the polynomial for reports.
    pub fn describe(&self) -> Value {
        let mut v = serde_json::json!({
            "polynomial": self.corr.polynomial().display(),
            "deg_z": self.corr.deg_z(),
            "deg_w": self.corr.deg_w(),
        });
        if let Some(c) = &self.circle {
            v["family"] = serde_json::to_value(&c.family).expect("family serializes");
        }
        v
    }
}

fn grid(raw: RawGrid) -> Result<BivariatePolynomial> {
    let rows = raw
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|c| {
                    let (re, im) = match c {
                        RawCoeff::Pair([re, im]) => (re, im),
                        RawCoeff::Real(re) => (re, 0.0),
                    };
                    gq_from_f64(re, im).ok_or_else(|| invalid("coefficients must be finite"))
                })
                .collect::<Result<Vec<GaussianRational>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BivariatePolynomial::from_grid(rows))
}

fn family(
    f: Family,
    m: Option<usize>,
    n: Option<usize>,
    exponents: Vec<usize>,
    pairs: Vec<(usize, usize)>,
) -> Result<CircleCorrespondence> {
    Ok(match f {
        Family::Monomial => {
            let (m, n) = m
                .zip(n)
                .ok_or_else(|| invalid("the monomial family needs m and n"))?;
            CircleCorrespondence::monomial(m, n)?
        }
        Family::Product => CircleCorrespondence::product(exponents)?,
        Family::Relations => CircleCorrespondence::relations(pairs)?,
    })
}

fn from_circle(cc: CircleCorrespondence) -> Result<Input> {
    Ok(Input {
        corr: cc.correspondence()?,
        circle: Some(cc),
    })
}

/// Parses a JSON polynomial spec.
pub fn parse_spec(text: &str) -> Result<Input> {
    let raw: RawSpec =
        serde_json::from_str(text).map_err(|e| invalid(format!("malformed spec: {e}")))?;
    match (raw.coeffs, raw.factors, raw.family) {
        (Some(c), None, None) => Ok(Input {
            corr: Correspondence::new(grid(c)?)?,
            circle: None,
        }),
        (None, Some(fs), None) => Ok(Input {
            corr: Correspondence::from_factors(fs.into_iter().map(grid).collect::<Result<_>>()?)?,
            circle: None,
        }),
        (None, None, Some(f)) => from_circle(family(
            f,
            raw.m,
            raw.n,
            raw.exponents.unwrap_or_default(),
            raw.pairs.unwrap_or_default(),
        )?),
        _ => Err(invalid(
            "a spec needs exactly one of coeffs, factors or family",
        )),
    }
}

pub fn read_text(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s).context("reading stdin")?;
        return Ok(s);
    }
    std::fs::read_to_string(path)
        .map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))
}

fn parse_pair(s: &str) -> Result<(usize, usize)> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| invalid(format!("pair {s:?} must look like i:j")))?;
    let num = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|_| invalid(format!("pair {s:?} must hold nonnegative integers")))
    };
    Ok((num(a)?, num(b)?))
}

impl SpecArgs {
    pub fn load(&self) -> Result<Input> {
        match (&self.spec, self.family) {
            (Some(path), _) => parse_spec(&read_text(path)?),
            (None, Some(f)) => {
                let pairs = self
                    .pairs
                    .iter()
                    .map(|p| parse_pair(p))
                    .collect::<Result<_>>()?;
                from_circle(family(f, self.m, self.n, self.exponents.clone(), pairs)?)
            }
            (None, None) => Err(invalid("give --spec FILE or --family")),
        }
    }
}

/// `re,im`, a bare real `re`, or `inf`.
pub fn parse_point(s: &str) -> Result<SpherePoint> {
    let t = s.trim();
    if t.eq_ignore_ascii_case("inf") || t == "∞" {
        return Ok(SpherePoint::infinity());
    }
    let num = |x: &str| {
        x.trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| invalid(format!("bad point {s:?}; use re,im or inf")))
    };
    let z = match t.split_once(',') {
        Some((re, im)) => Complex64::new(num(re)?, num(im)?),
        None => Complex64::new(num(t)?, 0.0),
    };
    Ok(SpherePoint::finite(z))
}

/// A JSON point: `[re, im]`, a number, or `"inf"`.
pub fn point_from_json(v: &Value) -> Result<SpherePoint> {
    match v {
        Value::String(s) => parse_point(s),
        Value::Number(x) => parse_point(&x.to_string()),
        Value::Array(a) if a.len() == 2 => {
            let f = |x: &Value| {
                x.as_f64()
                    .ok_or_else(|| invalid(format!("bad coordinate {x}")))
            };
            Ok(SpherePoint::finite(Complex64::new(f(&a[0])?, f(&a[1])?)))
        }
        _ => Err(invalid(format!(
            "bad point {v}; use [re, im], a number or \"inf\""
        ))),
    }
}

/// A JSON list of points.
pub fn read_points(path: &Path) -> Result<Vec<SpherePoint>> {
    let v: Value = serde_json::from_str(&read_text(path)?)
        .map_err(|e| invalid(format!("malformed point set {}: {e}", path.display())))?;
    let arr = v.as_array().ok_or_else(|| {
        invalid(format!(
            "{} must hold a JSON list of points",
            path.display()
        ))
    })?;
    arr.iter().map(point_from_json).collect()
}

/// `a/b` or an integer.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || invalid(format!("bad rational {s:?}"));
    let int = |t: &str| t.trim().parse::<BigInt>().map_err(|_| bad());
    match s.split_once('/') {
        Some((a, b)) => {
            let den = int(b)?;
            if den == BigInt::from(0) {
                return Err(bad());
            }
            Ok(BigRational::new(int(a)?, den))
        }
        None => Ok(BigRational::from_integer(int(s)?)),
    }
}

pub fn point_json(p: &SpherePoint) -> Value {
    match p.affine() {
        None => Value::String("inf".into()),
        Some(z) => serde_json::json!([z.re, z.im]),
    }
}

pub fn points_json(ps: &[SpherePoint]) -> Value {
    Value::Array(ps.iter().map(point_json).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn specs_parse() {
        let c = parse_spec(r#"{"coeffs": [[[-1, 0], 0, [1, 0]], [0], [1]]}"#).unwrap();
        assert_eq!((c.corr.deg_z(), c.corr.deg_w()), (2, 2));
        assert!(c.circle.is_none());
        let f = parse_spec(r#"{"family": "monomial", "m": 2, "n": 3}"#).unwrap();
        assert_eq!(f.corr.deg_z(), 2);
        let p = parse_spec(r#"{"factors": [[[0, 1], [-1]], [[0, 1], [0], [-1]]]}"#).unwrap();
        assert_eq!(p.corr.deg_z(), 3);
        assert!(parse_spec(r#"{"family": "monomial", "m": 2}"#).is_err());
        assert!(parse_spec(r#"{"coeffs": [[1]], "family": "product"}"#).is_err());
        assert!(parse_spec("not json").is_err());
    }

    #[test]
    fn points_parse() {
        assert!(parse_point("inf").unwrap().is_infinity());
        assert_eq!(
            parse_point("-1,0.5").unwrap(),
            SpherePoint::finite(Complex64::new(-1.0, 0.5))
        );
        assert_eq!(
            parse_point("2").unwrap(),
            SpherePoint::finite(Complex64::new(2.0, 0.0))
        );
        assert!(parse_point("x").is_err());
        assert!(point_from_json(&serde_json::json!([0, 1])).is_ok());
        assert!(point_from_json(&serde_json::json!({})).is_err());
    }

    #[test]
    fn rationals_parse() {
        assert_eq!(
            parse_rational("3/12").unwrap(),
            BigRational::new(1.into(), 4.into())
        );
        assert_eq!(
            parse_rational("2").unwrap(),
            BigRational::from_integer(2.into())
        );
        assert!(parse_rational("1/0").is_err());
    }
}
