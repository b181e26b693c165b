//! Algebraic correspondences `p(z, w) = 0` on the Riemann sphere.
//!
//! The crate is split the same way the computations depend on each other:
//!
//! * [`polyalg`]: exact and floating point polynomial arithmetic, resultants,
//!   gcds and a multiplicity-aware root finder.
//! * [`correspondence`]: fibers with branch indices, branched sets, paths and
//!   invariant subsets of the sphere.
//! * [`dynamics`]: the circle restriction of monomial and product families,
//!   expansivity, component counts, freeness and sampling of limit sets.
//! * [`bimodule`]: the Hilbert bimodule over a correspondence, sampled on a
//!   grid or exactly over a finite invariant set, and its truncated Fock space.
//! * [`ktheory`]: Smith normal form and the six-term exact sequence solver.
//!
//! Every fallible operation returns [`Result`] with the shared [`Error`].

pub mod bimodule;
pub mod correspondence;
pub mod dynamics;
pub mod error;
pub mod ktheory;
pub mod polyalg;
pub mod sphere;

pub use correspondence::{
    BranchedSets, Correspondence, FiberPoint, Restriction, Tolerances, WeightedFiber,
};

pub use error::{Error, Result};
pub use polyalg::{
    BihomogeneousPolynomial, BivariatePolynomial, ExactPolynomial, GaussianRational,
    UnivariatePolynomial,
};
pub use sphere::SpherePoint;
