use thiserror::Error;

/// Errors raised by the engine.
///
/// `Validation` covers malformed input (bad complexes, non-cocycles, wrong
/// degrees); `Unsupported` covers well-formed requests the engine refuses to
/// answer rather than guess.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("invalid cocycle: {0}")]
    InvalidCocycle(String),
    #[error("invalid involution: {0}")]
    InvalidInvolution(String),
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("mismatched complexes")]
    ComplexMismatch,
    #[error("not a chain map: {0}")]
    NotChainMap(String),
    #[error("class does not survive to this page: {0}")]
    NotInKernel(String),
    #[error("inconsistent spectral sequence: {0}")]
    Inconsistent(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for errors that correspond to malformed input rather than
    /// unsupported combinations.
    pub fn is_validation(&self) -> bool {
        !matches!(self, Error::Unsupported(_) | Error::Inconsistent(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
