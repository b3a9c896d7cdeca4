use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("position {position} of object v{object} is not a positive integer")]
    NonPositivePosition { object: usize, position: i64 },

    #[error("ranking has {found} positions but the universe has {expected} objects")]
    LengthMismatch { expected: usize, found: usize },

    #[error("rankings are over different universes ({left} vs {right} objects)")]
    UniverseMismatch { left: usize, right: usize },

    #[error("object index {index} is outside a universe of {n} objects")]
    ObjectOutOfRange { index: usize, n: usize },

    #[error("object v{0} appears more than once")]
    DuplicateObject(usize),

    #[error("ranking must be complete (object v{0} is unranked)")]
    Incomplete(usize),

    #[error("ranking must be strict (objects v{0} and v{1} are tied)")]
    NotStrict(usize, usize),

    #[error("operation needs at least {needed} objects, got {found}")]
    TooFewObjects { needed: usize, found: usize },

    #[error("n = {n} exceeds the enumeration cap of {cap}")]
    CapExceeded { n: usize, cap: usize },

    #[error("value {value} is outside the valid range [{min}, {max}]")]
    OutOfRange { value: f64, min: f64, max: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("instance has no judge ranking at least two objects")]
    EmptyInstance,

    #[error("scaled weights overflow exact integer arithmetic")]
    Overflow,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
