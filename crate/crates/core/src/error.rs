use thiserror::Error;

use crate::wordlang::ParseError;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("shape mismatch for {what}: expected {expected}, found {found}")]
    Shape {
        what: String,
        expected: String,
        found: String,
    },

    #[error("matrix is not hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("Choi form is not positive semidefinite (minimum eigenvalue {min_eig:.6e})")]
    NotPsd { min_eig: f64 },

    #[error("H is not anti-hermitian (residual {residual:.3e})")]
    NotAntiHermitian { residual: f64 },

    #[error("M(W) differs from M(flip(W)) (residual {residual:.3e})")]
    MultiplicationMismatch { residual: f64 },

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("target conditions for {target} fail: {detail}")]
    TargetConditions { target: String, detail: String },

    #[error("expansion of {terms} terms exceeds the guard limit {limit}")]
    GuardExceeded { terms: u128, limit: usize },

    #[error("letter {letter} is not in the alphabet of this functional")]
    ForeignLetter { letter: String },

    #[error("element #{index} is not in the kernel of the counit (counit = {re:.3e}{im:+.3e}i)")]
    NotCentered { index: usize, re: f64, im: f64 },

    #[error("alpha[{index}] = {re}{im:+}i is not purely imaginary")]
    NonImaginaryAlpha { index: usize, re: f64, im: f64 },

    #[error("variance parameter must be nonnegative, got {0}")]
    NegativeVariance(f64),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    pub(crate) fn shape(what: impl Into<String>, expected: impl ToString, found: impl ToString) -> Self {
        Error::Shape {
            what: what.into(),
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }
}
