use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime power")]
    NotAPrimePower(u64),
    #[error("field order {0} exceeds the supported maximum of 65536")]
    TooLarge(u64),
    #[error("field element {value} is out of range for GF({order})")]
    OutOfRange { value: u64, order: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid shape: {0}")]
    BadShape(String),
    #[error("integer overflow: {0}")]
    Overflow(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("outside the valid domain: {0}")]
    DomainViolation(String),
    #[error("budget exceeded: {what} requires {required} (budget {budget})")]
    BudgetExceeded { what: String, required: u128, budget: u128 },
    #[error("generator matrix has rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("weight hierarchy entry d_{0} is unknown")]
    IncompleteHierarchy(usize),
    #[error("malformed code record: {0}")]
    Format(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::DomainViolation(msg.into())
    }
}
