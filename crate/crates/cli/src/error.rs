use impurity_thermometry::ThermoError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Library(#[from] ThermoError),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    /// Process exit code: 2 for bad input, 3 for numerical failures, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Library(e) if e.is_numerical() => 3,
            CliError::Library(_) => 2,
            CliError::Io { .. } | CliError::Csv(_) => 1,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
