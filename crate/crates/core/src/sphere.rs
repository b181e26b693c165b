//! Points of the Riemann sphere in homogeneous coordinates.

use num_complex::Complex64;
use std::cmp::Ordering;
use std::fmt;

/// A point `[z1 : z2]` of the projective line.
///
/// Stored normalized so that the coordinate of larger modulus is exactly `1`.
/// Finite points with `|z| <= 1` therefore read `[z : 1]` and points with
/// `|z| > 1` read `[1 : 1/z]`; infinity is `[1 : 0]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpherePoint {
    z1: Complex64,
    z2: Complex64,
}

/// Which affine chart a point is naturally expressed in.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Chart {
    /// `z = z1 / z2` with `|z| <= 1`.
    Z(Complex64),
    /// `u = z2 / z1 = 1/z` with `|u| < 1`; `u = 0` is infinity.
    U(Complex64),
}

impl SpherePoint {
    /// Builds `[z1 : z2]`. Returns `None` when both coordinates vanish or one
    /// is not finite.
    pub fn new(z1: Complex64, z2: Complex64) -> Option<Self> {
        if !(z1.is_finite() && z2.is_finite()) {
            return None;
        }
        let (a, b) = (z1.norm(), z2.norm());
        if a == 0.0 && b == 0.0 {
            return None;
        }
        Some(if b >= a {
            SpherePoint {
                z1: z1 / z2,
                z2: Complex64::new(1.0, 0.0),
            }
        } else {
            SpherePoint {
                z1: Complex64::new(1.0, 0.0),
                z2: z2 / z1,
            }
        })
    }

    /// The finite point `z`. Panics on non-finite input.
    pub fn finite(z: Complex64) -> Self {
        Self::new(z, Complex64::new(1.0, 0.0)).expect("finite point")
    }

    /// The point with inverted coordinate `u = 1/z`.
    pub fn from_inverse(u: Complex64) -> Self {
        Self::new(Complex64::new(1.0, 0.0), u).expect("finite inverse coordinate")
    }

    pub fn infinity() -> Self {
        SpherePoint {
            z1: Complex64::new(1.0, 0.0),
            z2: Complex64::new(0.0, 0.0),
        }
    }

    pub fn zero() -> Self {
        Self::finite(Complex64::new(0.0, 0.0))
    }

    /// `e^{2 pi i t}`.
    pub fn on_circle(t: f64) -> Self {
        Self::finite(Complex64::from_polar(1.0, std::f64::consts::TAU * t))
    }

    /// Normalized homogeneous coordinates `(z1, z2)`.
    pub fn coords(&self) -> (Complex64, Complex64) {
        (self.z1, self.z2)
    }

    pub fn is_infinity(&self) -> bool {
        self.z2 == Complex64::new(0.0, 0.0)
    }

    /// The affine coordinate, or `None` at infinity.
    pub fn affine(&self) -> Option<Complex64> {
        if self.is_infinity() {
            None
        } else {
            Some(self.z1 / self.z2)
        }
    }

    pub fn chart(&self) -> Chart {
        if self.z2 == Complex64::new(1.0, 0.0) {
            Chart::Z(self.z1)
        } else {
            Chart::U(self.z2)
        }
    }

    /// Chordal distance `|a1 b2 - a2 b1| / (|a| |b|)`, with values in `[0, 1]`.
    pub fn chordal_distance(&self, other: &SpherePoint) -> f64 {
        let num = (self.z1 * other.z2 - self.z2 * other.z1).norm();
        let na = (self.z1.norm_sqr() + self.z2.norm_sqr()).sqrt();
        let nb = (other.z1.norm_sqr() + other.z2.norm_sqr()).sqrt();
        (num / (na * nb)).min(1.0)
    }

    /// Distance to the unit circle in the chordal metric, `+inf`-free.
    pub fn distance_to_circle(&self) -> f64 {
        match self.affine() {
            Some(z) if z.norm() > 0.0 => self.chordal_distance(&SpherePoint::finite(z / z.norm())),
            _ => std::f64::consts::FRAC_1_SQRT_2,
        }
    }

    /// Complex conjugate point.
    pub fn conj(&self) -> Self {
        SpherePoint {
            z1: self.z1.conj(),
            z2: self.z2.conj(),
        }
    }

    /// Total order used to make outputs deterministic: finite points by
    /// modulus-bounded chart, then by real and imaginary parts.
    pub fn canonical_cmp(&self, other: &SpherePoint) -> Ordering {
        let key = |p: &SpherePoint| -> (u8, f64, f64) {
            match p.chart() {
                Chart::Z(z) => (0, z.re, z.im),
                Chart::U(u) => (1, u.re, u.im),
            }
        };
        let (a, b) = (key(self), key(other));
        a.0.cmp(&b.0)
            .then(a.1.total_cmp(&b.1))
            .then(a.2.total_cmp(&b.2))
    }
}

impl fmt::Display for SpherePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.affine() {
            None => write!(f, "inf"),
            Some(z) => write!(f, "{}{:+}i", z.re, z.im),
        }
    }
}

/// Cartesian point on the unit sphere corresponding to `p` under inverse
/// stereographic projection.
pub fn to_unit_vector(p: &SpherePoint) -> [f64; 3] {
    let (z1, z2) = p.coords();
    let n = z1.norm_sqr() + z2.norm_sqr();
    let c = z1 * z2.conj();
    [
        2.0 * c.re / n,
        2.0 * c.im / n,
        (z1.norm_sqr() - z2.norm_sqr()) / n,
    ]
}

/// Inverse of [`to_unit_vector`].
pub fn from_unit_vector(v: [f64; 3]) -> SpherePoint {
    let [x, y, z] = v;
    if z > 0.0 {
        // near infinity: u = (x - iy) / (1 + z)
        SpherePoint::from_inverse(Complex64::new(x, -y) / (1.0 + z))
    } else {
        SpherePoint::finite(Complex64::new(x, y) / (1.0 - z))
    }
}
