use alloc::string::String;
use core::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Two subspaces or matrices live in spaces of different dimension.
    AmbientMismatch { left: usize, right: usize },
    /// Matrix shapes do not fit the operation or the declared dimensions.
    Shape(String),
    /// A matrix that must be invertible is not.
    Singular(&'static str),
    ZeroPolynomial,
    /// A table constructor was called with an illegal parameter.
    Malformed(String),
    /// Numerical routine refused its input (dimension limits, mean not zero, ...).
    Numeric(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::AmbientMismatch { left, right } => {
                write!(f, "ambient dimension mismatch: {left} vs {right}")
            }
            Error::Shape(s) => write!(f, "shape error: {s}"),
            Error::Singular(what) => write!(f, "{what} is singular"),
            Error::ZeroPolynomial => f.write_str("zero polynomial"),
            Error::Malformed(s) => write!(f, "malformed constructor: {s}"),
            Error::Numeric(s) => write!(f, "numeric: {s}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
