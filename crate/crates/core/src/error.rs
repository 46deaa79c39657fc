use thiserror::Error;

/// Errors produced by the toolkit.
///
/// The variants group into the classes the CLI maps onto exit codes:
/// structural/format problems, constraint violations and capacity limits.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("structural error: {0}")]
    Structural(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("parity violation: {0}")]
    Parity(String),

    #[error("parameter violation: {0}")]
    Parameter(String),

    #[error("domain error: {0}")]
    Domain(String),
}

impl Error {
    pub(crate) fn structural(msg: impl Into<String>) -> Self {
        Error::Structural(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: msg.into(),
        }
    }

    /// True for errors that indicate malformed input rather than a violated constraint.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::Structural(_) | Error::Parse { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
