//! Crate-wide error type.

use std::fmt;
use std::io;

#[derive(Debug)]
pub enum Error {
    /// Invalid configuration or input (empty corpus, bad bounds, short sentence).
    Config(String),
    /// A reserved marker was used where a real word is required.
    InvalidQuery(String),
    /// Malformed grammar, production, or rule vector.
    Grammar(String),
    /// No complete parse exists for the sentence.
    NoParse,
    /// The constraint system has no feasible point.
    Infeasible(String),
    /// A solution vector failed binary rounding checks.
    Decode(String),
    /// Decoded context variables disagree with the selected subsequence.
    Integrity(String),
    /// An enumeration or diagnostic was refused because the instance exceeds its size guard.
    SizeGuard(String),
    /// Malformed model or data file.
    Format(String),
    /// An internal solver invariant was violated.
    Internal(String),
    Io(io::Error),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Config(m) => write!(f, "configuration error: {}", m),
            Error::InvalidQuery(m) => write!(f, "invalid query: {}", m),
            Error::Grammar(m) => write!(f, "grammar error: {}", m),
            Error::NoParse => write!(f, "no complete parse"),
            Error::Infeasible(m) => write!(f, "infeasible: {}", m),
            Error::Decode(m) => write!(f, "decode error: {}", m),
            Error::Integrity(m) => write!(f, "integrity error: {}", m),
            Error::SizeGuard(m) => write!(f, "size guard exceeded: {}", m),
            Error::Format(m) => write!(f, "format error: {}", m),
            Error::Internal(m) => write!(f, "internal error: {}", m),
            Error::Io(e) => write!(f, "io error: {}", e),
        }
    }
}

impl std::error::Error for Error {}

impl From<io::Error> for Error {
    fn from(e: io::Error) -> Self {
        Error::Io(e)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
