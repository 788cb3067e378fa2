use thiserror::Error;

/// Errors raised by the library. Each variant names the violated precondition.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("factorization of {cofactor} did not finish within the effort budget")]
    FactorTimeout { cofactor: u128 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("polynomial is not irreducible: {0}")]
    NotIrreducible(String),
    #[error("polynomial has degree {found}, expected {expected}")]
    WrongDegree { expected: usize, found: usize },
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("division by zero")]
    DivisionByZero,
    #[error("operation requires a nonzero element")]
    ZeroElement,
    #[error("{0} does not divide the required modulus")]
    NotADivisor(String),
    #[error("enumeration of {size} elements exceeds the budget {budget}")]
    BudgetExceeded { size: u128, budget: u128 },
    #[error("sieve decomposition has non-positive delta")]
    NonPositiveDelta,
    #[error("bound denominator is not positive")]
    DenominatorNonPositive,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
