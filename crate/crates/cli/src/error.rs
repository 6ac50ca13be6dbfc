use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] oseen_core::Error),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("could not write output: {0}")]
    Output(String),

    #[error("run aborted at step {step} (tau = {tau}): {reason}")]
    Aborted { step: usize, tau: f64, reason: String },

    #[error("{0}")]
    Rejected(String),
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
