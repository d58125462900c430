use std::path::Path;

use thiserror::Error;

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Process exit codes.
pub mod code {
    pub const OK: i32 = 0;
    pub const CUTOFF: i32 = 2;
    pub const VIOLATION: i32 = 3;
    pub const PARSE_OR_IO: i32 = 4;
    pub const INCONSISTENT: i32 = 5;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] vdwt_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
    #[error("malformed cache: {0}")]
    Cache(String),
    #[error("inconsistent results: {0}")]
    Inconsistent(String),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(vdwt_core::Error::InconsistentBounds { .. })
            | CliError::Core(vdwt_core::Error::Inconsistent(_))
            | CliError::Inconsistent(_) => code::INCONSISTENT,
            _ => code::PARSE_OR_IO,
        }
    }
}
