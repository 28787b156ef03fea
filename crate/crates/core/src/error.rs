use thiserror::Error;

/// Errors raised by the algebra kernels and the file parsers.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A matrix does not define a homomorphism; `relation` is the index of a
    /// source relation whose image is not a relation of the target.
    #[error("ill-defined morphism: relation {relation} of the source is not mapped into the target relations")]
    IllDefined { relation: usize },

    #[error("x does not act invertibly: {0}")]
    NotInvertible(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported module shape: {0}")]
    UnsupportedShape(String),

    #[error("not exact at {node}")]
    NotExact { node: String },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("admissibility failure: {0}")]
    Admissibility(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}
