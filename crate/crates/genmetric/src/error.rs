use thiserror::Error;

/// Errors raised by space construction, the constructions between kinds and
/// the numerical procedures built on top of them.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid kind: {0}")]
    InvalidKind(String),
    #[error("space has no elements")]
    Empty,
    #[error("duplicate element label `{0}`")]
    DuplicateElement(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("tuple ({tuple}) has {got} entries, expected {expected}")]
    ArityMismatch {
        tuple: String,
        got: usize,
        expected: usize,
    },
    #[error("table is incomplete: no value for ({0})")]
    Incomplete(String),
    #[error("non-finite value for ({0})")]
    NonFinite(String),
    #[error("conflicting values for ({tuple}): {first} and {second}")]
    Conflict {
        tuple: String,
        first: f64,
        second: f64,
    },
    #[error("table would need {0} entries, which is more than this library stores")]
    TooLarge(u128),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("{op} does not accept a {kind} space")]
    UnsupportedKind { op: &'static str, kind: String },
    #[error("letter `{0}` is not in the alphabet")]
    UnknownLetter(char),
    #[error("invalid scoring scheme: {0}")]
    InvalidScheme(String),
    #[error("{0} elements exceeds the topology cap of {1}")]
    TooManyElements(usize, usize),
    #[error("window {window} is not usable with a prefix of length {len}")]
    Window { window: usize, len: usize },
    #[error("sequences have different lengths ({0} and {1})")]
    LengthMismatch(usize, usize),
    #[error("sequence is not Cauchy within tolerance")]
    NotCauchy,
    #[error("map `{map}` failed at iterate {index}: {reason}")]
    MapFailed {
        map: String,
        index: usize,
        reason: String,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
