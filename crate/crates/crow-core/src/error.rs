use core::fmt;

use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the supported domain of a function.
    Domain(String),
    /// The cavity-chain description is inconsistent with the requested operation.
    Spec(String),
    /// Matrix or index dimensions do not agree.
    Dimension(String),
    /// A linear system is numerically singular.
    SingularMatrix { condition: f64 },
    /// The QR iteration did not converge.
    Convergence { iterations: usize },
    /// A quantity that must be real carried an imaginary residue.
    NonReal { residue: f64 },
    /// A correlation was requested between a cavity and itself.
    Pair { cavity: i64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Spec(msg) => write!(f, "invalid cavity specification: {msg}"),
            Error::Dimension(msg) => write!(f, "dimension mismatch: {msg}"),
            Error::SingularMatrix { condition } => {
                write!(
                    f,
                    "matrix is numerically singular (condition estimate {condition:e})"
                )
            }
            Error::Convergence { iterations } => {
                write!(
                    f,
                    "eigensolver failed to converge after {iterations} iterations"
                )
            }
            Error::NonReal { residue } => {
                write!(
                    f,
                    "observable has imaginary residue {residue:e}; the basis is inconsistent"
                )
            }
            Error::Pair { cavity } => {
                write!(
                    f,
                    "correlation pair must join two distinct cavities (got {cavity} twice)"
                )
            }
        }
    }
}

impl core::error::Error for Error {}
