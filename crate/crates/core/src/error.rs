use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid object: {0}")]
    InvalidObject(String),
    #[error("not a morphism: {0}")]
    NotAMorphism(String),
    #[error("enumeration budget of {limit} exceeded while {what}")]
    BudgetExceeded { what: String, limit: u64 },
    #[error("{op} is not available for category {category}")]
    Unsupported { category: String, op: String },
    #[error("invalid input: {0}")]
    Input(String),
    #[error("construction failed: {0}")]
    Construction(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }
}
