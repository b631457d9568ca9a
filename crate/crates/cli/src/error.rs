use std::fmt;
use std::io;
use std::path::{Path, PathBuf};

/// Failure of a subcommand, carrying enough context to name the culprit.
#[derive(Debug)]
pub enum CliError {
    /// Bad flag value or configuration; exit code 2.
    Usage(String),
    /// The numerics refused the input; exit code 1.
    Domain(String),
    Io {
        path: PathBuf,
        source: io::Error,
    },
    /// A file was read but could not be parsed.
    Format {
        path: PathBuf,
        reason: String,
    },
}

impl CliError {
    pub fn io(path: &Path, source: io::Error) -> Self {
        CliError::Io { path: path.to_path_buf(), source }
    }

    pub fn format(path: &Path, reason: impl Into<String>) -> Self {
        CliError::Format { path: path.to_path_buf(), reason: reason.into() }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) | CliError::Domain(msg) => f.write_str(msg),
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
            CliError::Format { path, reason } => write!(f, "{}: {reason}", path.display()),
        }
    }
}

impl std::error::Error for CliError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            CliError::Io { source, .. } => Some(source),
            _ => None,
        }
    }
}

impl From<nakagami_core::Error> for CliError {
    fn from(e: nakagami_core::Error) -> Self {
        match e {
            nakagami_core::Error::InvalidConfig { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Domain(e.to_string()),
        }
    }
}
