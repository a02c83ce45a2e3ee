//! Error classification for exit statuses.

use autoreg_core::Error as CoreError;
use std::fmt;

/// CLI failure, bucketed by exit status: usage/config problems exit 2,
/// degenerate or numerical failures exit 1, I/O failures exit 3.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numerical(String),
    Io(String),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        Self::Usage(msg.into())
    }

    pub fn numerical(msg: impl Into<String>) -> Self {
        Self::Numerical(msg.into())
    }

    pub fn io(msg: impl Into<String>) -> Self {
        Self::Io(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Numerical(_) => 1,
            Self::Usage(_) => 2,
            Self::Io(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Usage(m) | Self::Numerical(m) | Self::Io(m) => write!(f, "{m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        Self::Numerical(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

/// Wraps an I/O error with the path it concerned.
pub fn io_ctx<'a>(
    path: &'a std::path::Path,
    op: &'a str,
) -> impl FnOnce(std::io::Error) -> CliError + 'a {
    move |e| CliError::io(format!("{op} {}: {e}", path.display()))
}
