use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("index error: {0}")]
    Index(String),
    #[error("input error: {0}")]
    Input(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("underlying set of a module over Z is infinite")]
    InfiniteUnderlying,
    #[error("size budget exceeded at level {level}: {needed} elements, budget {budget}")]
    Budget { level: usize, needed: String, budget: u64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::Budget { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
