use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Bad command-line usage (unknown scheme, invalid step size, ...).
    #[error("usage error: {0}")]
    Usage(String),
    /// Malformed or inconsistent configuration.
    #[error("configuration error: {0}")]
    Config(String),
    /// Input data violates a documented shape or range.
    #[error("data error: {0}")]
    Data(String),
    /// Argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    #[error("lookup error: {0}")]
    Lookup(String),
    #[error("solver error: {0}")]
    Solver(String),
    /// A day failed during a batch run; wraps the underlying cause.
    #[error("day {day_index}: {source}")]
    Day {
        day_index: usize,
        #[source]
        source: Box<Error>,
    },
    #[error("internal error: {0}")]
    Internal(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) => 1,
            Error::Solver(_) | Error::Internal(_) => 3,
            Error::Day { source, .. } => source.exit_code(),
            Error::Config(_)
            | Error::Data(_)
            | Error::Domain(_) | Error::Lookup(_) | Error::Io { .. } => 2,
        }
    }
}
