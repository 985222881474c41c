use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("quiver has an oriented cycle: {}", .0.join(" -> "))]
    Cycle(Vec<String>),

    #[error("weight of arrow {0} is zero")]
    ZeroWeight(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("operation requires a prime field")]
    PrimeFieldRequired,

    #[error("enumeration needs {count} cases, budget is {budget}; use sampled mode")]
    BudgetExceeded { count: u128, budget: u128 },

    #[error("no full-rank sample after {0} attempts")]
    RetryLimit(usize),

    #[error("graded component V^{t}_{d} is zero")]
    ZeroComponent { t: usize, d: i64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("map is not surjective")]
    NotSurjective,

    #[error("map is not injective")]
    NotInjective,

    #[error("invalid profile: {0}")]
    Profile(String),

    #[error("{0}")]
    InvalidInput(String),
}
