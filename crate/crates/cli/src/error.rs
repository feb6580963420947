use std::path::PathBuf;

use thiserror::Error;

/// Failures of a command, each mapped to a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),

    /// The run stopped before producing a single trace record.
    #[error("run stopped before any output: {0}")]
    NoOutput(String),

    #[error("analysis failed: {0}")]
    Analysis(String),

    #[error("malformed trace {path}: {message}")]
    Trace { path: PathBuf, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
}

impl CliError {
    /// `2` for configuration and input errors, `3` for a numerical stop
    /// before any record, `1` for everything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Trace { .. } => 2,
            CliError::NoOutput(_) => 3,
            CliError::Analysis(_) | CliError::Io { .. } | CliError::Json { .. } => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

pub(crate) fn io_error(path: &std::path::Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}
