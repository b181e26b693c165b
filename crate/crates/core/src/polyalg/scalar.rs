//! Coefficient rings.

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, ToPrimitive, Zero};
use std::fmt::Debug;

/// `Q(i)`, the field used for exact computations.
pub type GaussianRational = Complex<BigRational>;

/// A field of polynomial coefficients.
pub trait Coefficient: Clone + Debug + PartialEq + Num + std::ops::Neg<Output = Self> {
    fn to_c64(&self) -> Complex64;
    fn from_i64(v: i64) -> Self;
    fn conj(&self) -> Self;
    /// Modulus as a float, for pivoting and thresholds.
    fn magnitude(&self) -> f64 {
        self.to_c64().norm()
    }
}

impl Coefficient for Complex64 {
    fn to_c64(&self) -> Complex64 {
        *self
    }
    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }
    fn conj(&self) -> Self {
        Complex::conj(self)
    }
}

impl Coefficient for GaussianRational {
    fn to_c64(&self) -> Complex64 {
        gq_to_c64(self)
    }
    fn from_i64(v: i64) -> Self {
        gq(v, 0)
    }
    fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }
}

/// The Gaussian integer `re + im i`.
pub fn gq(re: i64, im: i64) -> GaussianRational {
    Complex::new(
        BigRational::from_integer(BigInt::from(re)),
        BigRational::from_integer(BigInt::from(im)),
    )
}

/// The real rational `num / den`. Panics if `den == 0`.
pub fn gq_rational(num: i64, den: i64) -> GaussianRational {
    Complex::new(
        BigRational::new(BigInt::from(num), BigInt::from(den)),
        BigRational::zero(),
    )
}

/// Exact conversion of a pair of finite doubles.
pub fn gq_from_f64(re: f64, im: f64) -> Option<GaussianRational> {
    Some(Complex::new(
        BigRational::from_f64(re)?,
        BigRational::from_f64(im)?,
    ))
}

pub fn gq_to_c64(x: &GaussianRational) -> Complex64 {
    Complex64::new(
        x.re.to_f64().unwrap_or(f64::NAN),
        x.im.to_f64().unwrap_or(f64::NAN),
    )
}
