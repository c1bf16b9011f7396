use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An enumeration would visit more points than the configured budget.
    #[error("point budget exceeded: {required} points required, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u64 },

    /// A factored polynomial failed its integrality contract: the product of
    /// its forms was not divisible by the denominator at some lattice point.
    #[error("integrality violation at {point:?}: {numerator} not divisible by {denominator}")]
    IntegralityViolation {
        point: Vec<i64>,
        numerator: String,
        denominator: String,
    },

    #[error("matrix is singular (not full rank)")]
    SingularMatrix,

    #[error("unsupported variant: {0}")]
    UnsupportedVariant(String),

    #[error("cache i/o: {0}")]
    Cache(String),
}

pub type Result<T> = std::result::Result<T, Error>;
