use thiserror::Error;

use crate::words::Rational;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid element: {0}")]
    InvalidElement(String),

    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("the empty word addresses all of [0,1], not a proper branch")]
    EmptyWord,

    #[error("{0} is not a dyadic rational")]
    NonDyadic(Rational),

    #[error("invalid interval: {0}")]
    InvalidInterval(String),

    #[error("iteration cap of {cap} exceeded")]
    IterationCapExceeded { cap: u64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no common co-generator exists in the abelianization")]
    NoAbelianCogenerator,

    #[error("obstructed: {0}")]
    Obstructed(String),

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("word of length {length} exceeds depth bound {bound}")]
    DepthExceeded { length: usize, bound: usize },

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}
