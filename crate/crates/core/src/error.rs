use thiserror::Error;

/// Errors surfaced by model construction, geometry queries, and certifiers.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    Dimension { expected: usize, found: usize },

    #[error("invalid model: {0}")]
    Validation(String),

    #[error("unsupported expression: {0}")]
    UnsupportedExpression(String),

    #[error("parameter outside domain closure: {0}")]
    Domain(String),

    #[error("LP solver failure: {0}")]
    Solver(String),

    #[error("combinatorial blowup: {size} generators exceed cap {cap}{advice}")]
    CombinatorialBlowup {
        size: usize,
        cap: usize,
        advice: String,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("not applicable: {0}")]
    NotApplicable(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub fn blowup(size: usize, cap: usize, advice: &str) -> Self {
        Error::CombinatorialBlowup {
            size,
            cap,
            advice: if advice.is_empty() {
                String::new()
            } else {
                format!("; {advice}")
            },
        }
    }
}
