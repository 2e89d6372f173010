use std::path::PathBuf;

use bell_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Malformed or semantically invalid input file. `line` is 1-based.
    #[error("{}: line {line}: {message}", path.display())]
    Parse { path: PathBuf, line: usize, message: String },

    /// Invalid command-line value.
    #[error("{0}")]
    Validation(String),

    /// Name not found in a fixed table.
    #[error("{0}")]
    Lookup(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Core(#[from] CoreError),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse { .. } | CliError::Validation(_) => 2,
            CliError::Lookup(_) => 3,
            CliError::Io { .. } => 4,
            CliError::Core(CoreError::InvalidInput(_))
            | CliError::Core(CoreError::Signaling { .. })
            | CliError::Core(CoreError::InsufficientData { .. }) => 2,
            CliError::Core(CoreError::Inconsistent(_)) => 1,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
