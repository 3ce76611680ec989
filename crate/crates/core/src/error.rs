//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by estimation, simulation, and ingestion routines.
///
/// I/O problems are kept distinct from numerical/simulation failures so that
/// callers (notably the CLI) can map them to different exit codes.
#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on user-supplied data failed.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An argument is outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A moment-constant lookup failed: the table has no entry for the
    /// requested order/observation count and interpolation cannot reach it.
    #[error("lambda table has no usable entry for r={r}, m={m}")]
    MissingLambda { r: u32, m: u32 },

    /// A numerical routine failed to converge or produced a non-finite value.
    #[error("numeric failure: {0}")]
    Numeric(String),

    /// Underlying file-system failure.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// Malformed CSV input.
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    /// A text record could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors caused by user-supplied data rather than computation.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidInput(_) | Error::Io(_) | Error::Csv(_) | Error::Parse(_)
        )
    }
}
