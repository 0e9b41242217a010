use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("temperature must be {0}")]
    InvalidTemperature(&'static str),

    #[error("{what} did not converge after {evaluations} evaluations (residual {residual:.3e})")]
    NotConverged {
        what: &'static str,
        evaluations: usize,
        residual: f64,
    },

    #[error("bracket failure: {0}")]
    Bracket(String),

    #[error("imaginary frequency: {0}")]
    ImaginaryFrequency(String),

    #[error("basis sector has {dim} states, above the configured limit of {limit}")]
    BasisTooLarge { dim: usize, limit: usize },

    #[error("matrix element couples states of different parity ({0})")]
    ParityViolation(String),

    #[error("stale mean-field solution: {0}")]
    StaleSolution(String),
}

pub type Result<T> = std::result::Result<T, Error>;
