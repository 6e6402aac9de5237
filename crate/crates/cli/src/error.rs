use casimir_core::Error as CoreError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("invalid config file: {0}")]
    Config(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Config(_) => 2,
            CliError::Core(CoreError::Domain(_)) => 2,
            CliError::Core(CoreError::NonConvergence(_) | CoreError::OutOfRange(_)) => 3,
            CliError::Io(_) => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) | CliError::Config(_) => "usage",
            CliError::Core(CoreError::Domain(_)) => "domain",
            CliError::Core(CoreError::NonConvergence(_)) => "non_convergence",
            CliError::Core(CoreError::OutOfRange(_)) => "out_of_range",
            CliError::Io(_) => "io",
        }
    }
}

pub fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

pub type CliResult<T> = Result<T, CliError>;
