use thiserror::Error;

/// Errors raised by the library. Domain violations are reported rather than
/// extended: every map refuses inputs outside the set it is a bijection on.
#[derive(Debug, Error)]
pub enum Error {
    #[error("series is not invertible: constant term is zero")]
    NotInvertible,

    #[error("logarithm needs a series with constant term 1, found {0}")]
    LogConstantTerm(String),

    #[error("coefficient of degree {degree} is not an integer: {value}")]
    NonInteger { degree: usize, value: String },

    #[error("{what} = {value} exceeds the cap {cap}")]
    CapExceeded {
        what: &'static str,
        value: u64,
        cap: u64,
    },

    #[error("piece {piece} does not belong to the {alphabet} alphabet")]
    NotInAlphabet { piece: String, alphabet: String },

    #[error("heaps over different alphabets cannot be composed ({0} vs {1})")]
    AlphabetMismatch(String, String),

    #[error("occurrence ({layer}, {position}) is not in the heap")]
    OccurrenceOutOfRange { layer: usize, position: usize },

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("precondition violated: {0}")]
    Domain(String),

    #[error("invalid point set: {0}")]
    InvalidPointSet(String),

    #[error("not a partial order: {0}")]
    NotAPartialOrder(String),

    #[error("poset has no unique maximal element")]
    NoUniqueMaximum,

    #[error("malformed input: {0}")]
    Format(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
