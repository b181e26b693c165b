//! The Hilbert bimodule `X = C(C_p)` over `A = C(J)`.
//!
//! `(a . f . b)(z, w) = a(z) f(z, w) b(w)` and
//! `(f|g)_A(w) = sum_{p(z, w) = 0} e(z, w) conj(f(z, w)) g(z, w)`.
//! Path spaces carry the same structure with path weights
//! `e(z_1, ..., z_{n+1}) = prod e(z_i, z_{i+1})`.

pub mod finite;
pub mod fock;
pub mod sampled;

pub use finite::{Edge, FiniteBimodule, IndexPath};
pub use fock::{
    fock_build, fock_relation_check, vanishing_hypothesis_witness, vanishing_lemma_check,
    FockReport, FockTruncation, Operator, VanishingReport, FOCK_MAX_DIM, FOCK_MAX_LEVEL,
};
pub use sampled::{
    ideal_membership, inner_product, monomial_basis, paths_ending_at, reconstruction_error,
    tensor_isometry_check, IdealReport, PathCell, PathFunction, PathGrid, SampleGrid,
    SampledFunction, DEFAULT_GRID,
};
