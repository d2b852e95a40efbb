use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("not a cochain complex: composition of differentials nonzero at degree {degree}")]
    NotAComplex { degree: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("map does not intertwine the endomorphisms: {0}")]
    NotIntertwining(String),
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("{0} is not prime")]
    NotPrime(String),
    #[error("parse error at line {line}, column {column}: {msg}")]
    Parse { line: usize, column: usize, msg: String },
    #[error("substitution is not primitive: {0}")]
    NotPrimitive(String),
    #[error("unclassified limit: {0}")]
    Unclassified(String),
    #[error("inconsistent extension resolution: {0}")]
    BadResolution(String),
    #[error("invalid spectral-sequence input: {0}")]
    Rotation(String),
    #[error("unknown dataset `{0}`")]
    UnknownDataset(String),
    #[error("{0}")]
    Other(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Other(format!("json: {e}"))
    }
}
