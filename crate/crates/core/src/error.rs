use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("degree {0} exceeds 3")]
    DegreeTooHigh(u32),
    #[error("variable x{index} out of range for n = {n}")]
    VariableOutOfRange { index: usize, n: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("polynomial is not a homogeneous cubic")]
    NotHomogeneous,
    #[error("coefficient too large for machine-word evaluation")]
    Overflow,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("gcd({0}, {1}) != 1")]
    NotCoprime(i64, i64),
    #[error("quadrature did not converge (error estimate {0:e})")]
    Quadrature(f64),
    #[error("dimension estimate ambiguous: {0}")]
    Ambiguous(String),
    #[error("no slicing vector found with |m| <= {0}")]
    NoSlicingVector(i64),
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("unknown case {0}")]
    UnknownCase(String),
}
