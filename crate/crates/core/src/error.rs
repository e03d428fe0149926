use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("group order {order} exceeds the configured maximum {max}")]
    OrderOverflow { order: u128, max: usize },

    #[error("invalid G-set: {0}")]
    InvalidGSet(String),

    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),

    #[error("generator index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: i64, rank: usize },

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("word does not normalize the subgroup")]
    NotNormalizing,

    #[error("word is not an element of the subgroup")]
    NotInSubgroup,

    #[error("budget exceeded in stage `{stage}`")]
    BudgetExceeded { stage: String },

    #[error("insufficient coefficient window: {0}")]
    InsufficientWindow(String),

    #[error("series precondition violated: {0}")]
    SeriesPrecondition(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
