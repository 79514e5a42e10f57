use thiserror::Error;

/// Errors produced by the numerical routines and the file formats.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is numerically singular (pivot {pivot:.3e} below tolerance {tol:.3e})")]
    SingularMatrix { pivot: f64, tol: f64 },

    #[error("shift z = {re}{im:+}i is numerically in the spectrum")]
    SingularShift { re: f64, im: f64 },

    #[error("iteration did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("invalid epsilon {0}")]
    InvalidEpsilon(f64),

    #[error("right-hand side y is zero")]
    ZeroRhs,

    #[error("matrix is not stable (eigenvalue with real part {max_real:e} > 0)")]
    NotStable { max_real: f64 },

    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),

    #[error("unknown table `{0}`")]
    UnknownTable(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
