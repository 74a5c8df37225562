//! Error type shared by every numeric operation in the crate.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("{op}: domain error: {msg}")]
    Domain { op: &'static str, msg: String },

    /// An iterative evaluation (series or adaptive quadrature) did not reach
    /// the requested tolerance within its budget.
    #[error("{op}: failed to converge: {msg}")]
    NonConvergence { op: &'static str, msg: String },

    /// The requested evaluation point is outside the region of convergence.
    #[error("{op}: divergent: {msg}")]
    Divergence { op: &'static str, msg: String },

    /// Parameters are valid but not supported by this evaluation path.
    #[error("{op}: unsupported: {msg}")]
    Unsupported { op: &'static str, msg: String },

    /// Scenario configuration is inconsistent or incomplete.
    #[error("config: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn domain(op: &'static str, msg: impl Into<String>) -> Self {
        Error::Domain { op, msg: msg.into() }
    }

    pub(crate) fn non_convergence(op: &'static str, msg: impl Into<String>) -> Self {
        Error::NonConvergence { op, msg: msg.into() }
    }

    pub(crate) fn divergence(op: &'static str, msg: impl Into<String>) -> Self {
        Error::Divergence { op, msg: msg.into() }
    }

    pub(crate) fn unsupported(op: &'static str, msg: impl Into<String>) -> Self {
        Error::Unsupported { op, msg: msg.into() }
    }

    /// Name of the failing operation, when the error carries one.
    pub fn op(&self) -> Option<&'static str> {
        match self {
            Error::Domain { op, .. }
            | Error::NonConvergence { op, .. }
            | Error::Divergence { op, .. }
            | Error::Unsupported { op, .. } => Some(op),
            Error::Config(_) => None,
        }
    }

    /// True for errors that indicate a numeric budget was exhausted rather
    /// than a caller mistake.
    pub fn is_numeric(&self) -> bool {
        matches!(self, Error::NonConvergence { .. } | Error::Divergence { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
