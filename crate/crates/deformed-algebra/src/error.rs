//! Error type shared by every module of the crate.

use std::fmt;

/// Everything that can go wrong when building or checking a representation.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A caller-supplied parameter is out of range or malformed.
    InvalidParameter(String),
    /// A construction would exceed a configured resource cap.
    ResourceLimit(String),
    /// An algebraic constraint between parameters is violated; carries the residual.
    Constraint { what: String, residual: f64 },
    /// A numerical self-check failed (e.g. an operator that must be PSD is not).
    NumericalConsistency(String),
    /// The operation is defined, but not for this parameter combination.
    Unsupported(String),
    /// A representation-level identity that must hold exactly does not.
    RepresentationInconsistency(String),
    /// A test state fails the preconditions of a relation check.
    StatePrecondition { state: String, reason: String },
    /// Tabulated input could not be parsed.
    Parse { line: usize, message: String },
    /// Underlying I/O failure while reading tabulated input.
    Io(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::ResourceLimit(msg) => write!(f, "resource limit: {msg}"),
            Error::Constraint { what, residual } => {
                write!(f, "constraint violated: {what} (residual {residual:.3e})")
            }
            Error::NumericalConsistency(msg) => {
                write!(f, "numerical consistency failure: {msg}")
            }
            Error::Unsupported(msg) => write!(f, "unsupported case: {msg}"),
            Error::RepresentationInconsistency(msg) => {
                write!(f, "representation inconsistency: {msg}")
            }
            Error::StatePrecondition { state, reason } => {
                write!(f, "test state `{state}` violates preconditions: {reason}")
            }
            Error::Parse { line, message } => write!(f, "parse error at line {line}: {message}"),
            Error::Io(msg) => write!(f, "i/o error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
