//! Error type shared by every module of the crate.

use thiserror::Error;

/// Failure modes of the algorithms in this crate.
///
/// The variants map one-to-one onto the process exit codes of the command
/// line tool, so keep them coarse.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    /// The input violates a stated precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// An iterative numerical method ran out of iterations.
    #[error("no convergence after {iterations} iterations: {context}")]
    NonConvergence { context: String, iterations: usize },
    /// A size or step cap was hit.
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    /// The decision procedure has no criterion for this input.
    #[error("undecided: {0}")]
    Undecided(String),
    /// The six-term sequence does not determine the group without extension data.
    #[error("extension problem not determined: {0}")]
    ExtensionAmbiguous(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }
}
