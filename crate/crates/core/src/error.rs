use thiserror::Error;

/// Errors produced by the numerical routines and the data pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The result is not representable as a finite `f64`.
    #[error("overflow: {0}")]
    Overflow(String),

    /// A series or iteration hit its cap before meeting its tolerance.
    #[error("no convergence after {iterations} iterations: {what}")]
    NonConvergence { what: String, iterations: usize },

    /// A marching solver produced a non-finite value.
    #[error("solver blow-up at step {step}")]
    Blowup { step: usize },

    /// No usable data points remained.
    #[error("empty input: {0}")]
    Empty(String),

    /// Malformed input text.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
