use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error at {pointer}: {message}")]
    Parse { pointer: String, message: String },

    #[error("validation error: {0}")]
    Validation(String),

    #[error("ingest error: {0}")]
    Ingest(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(String),

    #[error(transparent)]
    Core(#[from] hirob_core::Error),
}
