use thiserror::Error;

use crate::observables::Diagnostics;

/// Errors produced by the numerical kernels and observables.
#[derive(Debug, Clone, Error)]
pub enum CasimirError {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Invalid numerics policy, table size or model selection.
    #[error("configuration error: {0}")]
    Config(String),

    /// The inputs are valid but outside the accuracy window of an approximation.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A truncation cap was exhausted before the requested tolerance was met.
    #[error("convergence failure: {message}")]
    Convergence {
        message: String,
        diagnostics: Box<Diagnostics>,
    },
}

impl CasimirError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        CasimirError::Domain(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        CasimirError::Config(msg.into())
    }

    pub(crate) fn convergence(msg: impl Into<String>, diagnostics: Diagnostics) -> Self {
        CasimirError::Convergence {
            message: msg.into(),
            diagnostics: Box::new(diagnostics),
        }
    }
}

pub type Result<T> = std::result::Result<T, CasimirError>;
