//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("unsupported field parameters: {0}")]
    UnsupportedField(String),
    #[error("index {index} out of range for a structure of size {size}")]
    IndexOutOfRange { index: u64, size: u64 },
    #[error("inverse of zero")]
    ZeroInverse,
    #[error("duplicate interpolation abscissa")]
    DuplicateAbscissa,
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("{0} is not a code locator")]
    NotALocator(u64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("row {row} sums to {sum}, not 1")]
    RowNotNormalized { row: usize, sum: f64 },
    #[error("enumeration size {size} exceeds cap {cap}")]
    CapExceeded { size: u64, cap: u64 },
    #[error("bound inapplicable: epsilon {epsilon} below threshold {threshold}")]
    BoundInapplicable { epsilon: f64, threshold: f64 },
    #[error("negative radicand {0}")]
    NegativeRadicand(f64),
    #[error("reconstruction inapplicable: agreement {agreement} with {points} points and degree bound {degree}")]
    GsInapplicable {
        agreement: usize,
        points: usize,
        degree: usize,
    },
    #[error("no workable interpolation multiplicity below {0}")]
    GsMultiplicityOverflow(usize),
    #[error("interpolated degree exceeds message degree bound")]
    DegreeOverflow,
    #[error("vector is not a codeword indicator")]
    NotIndicator,
    #[error("malformed input: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
