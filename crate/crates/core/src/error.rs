use thiserror::Error;

/// Error type shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Presentation text could not be parsed; positions are 1-based.
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse {
        line: usize,
        col: usize,
        msg: String,
    },

    /// A caller-supplied parameter is out of range or inconsistent.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A divided-power coproduct failed to divide exactly by s!.
    /// This would contradict integrality of the coproduct and is treated
    /// as a hard error rather than silently rounding.
    #[error("inexact division: {0}")]
    InexactDivision(String),

    /// An internal invariant failed; indicates a bug, never bad input.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn parse(line: usize, col: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            col,
            msg: msg.into(),
        }
    }
}
