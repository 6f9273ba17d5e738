use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field of order {p}^{n} exceeds 2^16")]
    FieldTooLarge { p: u64, n: u32 },
    #[error("invalid modulus: {0}")]
    BadModulus(String),
    #[error("value {value} is not an element of GF({q})")]
    NotAnElement { value: u64, q: u32 },
    #[error("inverse of zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("enumeration of {needed} vectors exceeds budget {limit}")]
    BudgetExceeded { needed: u128, limit: u64 },
    #[error("{what}: size {size} exceeds limit {limit}")]
    LimitExceeded {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("not a frame matrix: {0}")]
    NotFrame(String),
    #[error("no graph representation: {0}")]
    NoGraphRepresentation(String),
    #[error("not a cycle: {0}")]
    NotACycle(String),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// A lemma-level contract did not hold. `detail` carries the instance.
    #[error("{lemma} violated: {detail}")]
    Violation {
        lemma: &'static str,
        detail: serde_json::Value,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn is_violation(&self) -> bool {
        matches!(self, Error::Violation { .. })
    }
}
