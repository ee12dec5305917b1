use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid word: index {index} out of range for {map_count} maps")]
    InvalidWord { index: u32, map_count: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("enumeration budget exceeded: {what} needs more than {budget} words")]
    BudgetExceeded { what: &'static str, budget: usize },

    #[error("hull [min fixed point, max fixed point] is not invariant under map {map_index}")]
    NotInvariant { map_index: usize },

    #[error("{op} requires orientation-preserving maps (sign +1)")]
    UnsupportedOrientation { op: &'static str },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("contraction ratios must satisfy c1 + c2 < 1 so the two pieces are disjoint")]
    Overlap,

    #[error("cannot parse {input:?} as {expected}")]
    Parse {
        input: String,
        expected: &'static str,
    },
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
