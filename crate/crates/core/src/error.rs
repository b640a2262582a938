use thiserror::Error;

/// Errors raised by the library and the command-line front end.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or inconsistent arguments (dimension mismatch, out-of-range symbol, ...).
    #[error("invalid parameter: {0}")]
    Param(String),

    /// Arguments are well formed but outside the regime where the operation is defined.
    #[error("refused: {0}")]
    Refused(String),

    /// A dense structure would exceed its configured size cap.
    #[error("{what} of {value} exceeds the cap of {cap}")]
    Capacity {
        what: &'static str,
        value: u128,
        cap: u128,
    },

    /// Family file or word text could not be parsed.
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// A search ran out of time; only a lower bound is known.
    #[error("timed out after {ms} ms; best size found {lower_bound} is only a lower bound")]
    Timeout { ms: u128, lower_bound: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code used by the CLI for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Param(_) | Error::Refused(_) | Error::Capacity { .. } => 2,
            Error::Timeout { .. } => 3,
            Error::Parse { .. } | Error::Io(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Param(msg.into()))
}
