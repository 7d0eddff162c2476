use thiserror::Error;

/// Errors raised while configuring or running the optimizer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum OptimizeError {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("objective returned non-finite value {value} at {position:?}")]
    NonFinite { value: f64, position: Vec<f64> },

    #[error("objective aborted the run: {0}")]
    Aborted(String),
}
