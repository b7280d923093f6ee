use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid group spec `{0}`: {1}")]
    GroupSyntax(String, String),

    #[error("cyclic factor must be at least 2, got {0}")]
    FactorTooSmall(u64),

    #[error("group order {order} exceeds the configured maximum {max}")]
    GroupTooLarge { order: u64, max: u64 },

    #[error("element has {got} coordinates, group has {expected} factors")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid graph spec `{0}`: {1}")]
    GraphSyntax(String, String),

    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("malformed labeling: {0}")]
    MalformedLabeling(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A search ran out of nodes or time. Never a proof of non-existence.
    #[error("unknown: search budget exhausted ({0})")]
    BudgetExhausted(String),

    /// The append-block search behind path extension found nothing. This says
    /// nothing about the longer path itself.
    #[error("no extension found: {0}")]
    NoExtension(String),

    /// A construction produced a labeling the verifier rejected.
    #[error("internal error: construction `{method}` failed verification: {detail}")]
    Internal { method: String, detail: String },
}

pub type Result<T> = std::result::Result<T, Error>;
