//! Polynomial arithmetic over the Gaussian rationals and over `Complex64`.
//!
//! Exact arithmetic ([`ExactPolynomial`], [`BivariatePolynomial`]) is used for
//! everything whose answer is a yes/no question: squarefreeness, resultants,
//! gcds. Floating point ([`UnivariatePolynomial`]) is used for roots.

mod bivariate;
mod resultant;
mod roots;
mod scalar;
mod univariate;

pub use bivariate::{BihomogeneousPolynomial, BivariatePolynomial};
pub use resultant::{gcd_bivariate, resultant_w, resultant_z, squarefree_check, SquarefreeReport};
pub use roots::{
    projective_roots, roots, ChartPolicy, ProjectiveRoot, RootCluster, Roots, DEFAULT_CLUSTER_TOL,
    MAX_SWEEPS,
};
pub use scalar::{gq, gq_from_f64, gq_rational, gq_to_c64, Coefficient, GaussianRational};
pub use univariate::{gcd_univariate, ExactPolynomial, Poly, UnivariatePolynomial};
