use thiserror::Error;

/// Failure of a CLI run, classified by exit status.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, config file or flag combination.
    #[error("{0}")]
    Config(String),

    /// Inputs outside the model's domain.
    #[error("{0}")]
    Domain(dwell_core::Error),

    /// A numerical procedure failed.
    #[error("{0}")]
    Numeric(dwell_core::Error),

    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        CliError::Config(message.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Domain(_) => 3,
            CliError::Numeric(_) => 4,
            CliError::Io(_) => 1,
        }
    }
}

impl From<dwell_core::Error> for CliError {
    fn from(e: dwell_core::Error) -> Self {
        if e.is_numeric() {
            CliError::Numeric(e)
        } else {
            CliError::Domain(e)
        }
    }
}
