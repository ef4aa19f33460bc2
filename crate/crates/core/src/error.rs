use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("argument {value} outside supported range (threshold {threshold}): {context}")]
    Range {
        value: f64,
        threshold: f64,
        context: String,
    },

    #[error("index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("time-step condition violated: max step {max_step:.6e} >= admissible {threshold:.6e}")]
    ConditionViolated { max_step: f64, threshold: f64 },

    #[error("non-decreasing step sizes required, but dt[{index}] > dt[{}]", index + 1)]
    DecreasingSteps { index: usize },

    #[error("linear solver failed after {iterations} iterations (relative residual {residual:.3e})")]
    SolverFailure { iterations: usize, residual: f64 },

    #[error("coefficient violation: {0}")]
    CoefficientViolation(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}
