use num_complex::Complex64;
use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(
        "quadrature did not converge: estimate {value:e} with error estimate {error:e} after {evaluations} evaluations"
    )]
    NoConvergence {
        value: f64,
        error: f64,
        evaluations: usize,
    },

    #[error("integrand is not finite at x = {0}")]
    NonFinite(f64),

    #[error("pole at s = {0}")]
    Pole(Complex64),

    #[error("divergent integral: {0}")]
    Divergent(String),

    #[error("outside the evaluation envelope: {0}")]
    Envelope(String),

    #[error("unsupported field: {0}")]
    UnsupportedField(String),

    #[error("uncertified zero list: {0}")]
    Uncertified(String),

    #[error("malformed zero file: {0}")]
    Malformed(String),

    #[error("checksum mismatch: file declares {declared}, body hashes to {computed}")]
    Checksum { declared: String, computed: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
