use thiserror::Error;

/// Errors raised by state construction, entropy evaluation and the experiment drivers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("malformed bipartition: matrix dim {dim} != {dim_a} x {dim_b}")]
    Bipartition {
        dim: usize,
        dim_a: usize,
        dim_b: usize,
    },

    #[error("matrix is not Hermitian (max |A - A^H| = {0:e})")]
    NotHermitian(f64),

    #[error("trace is not 1 (got {0})")]
    InvalidTrace(f64),

    #[error("not positive semi-definite (min eigenvalue {0:e})")]
    NotPsd(f64),

    #[error("operator is not a projector (max |P^2 - P| = {0:e})")]
    NotProjector(f64),

    #[error("eigensolver did not converge after {0} sweeps")]
    NoConvergence(usize),

    #[error("q = {0} outside the accepted range (0, 200]")]
    InvalidQ(f64),

    #[error("q-logarithm domain error: x = {0} must be > 0")]
    LogDomain(f64),

    #[error("invalid probability vector: {0}")]
    InvalidProbabilities(String),

    #[error("invalid state parameters: {0}")]
    InvalidParameters(String),

    #[error("invalid experiment spec: {0}")]
    InvalidSpec(String),

    #[error("non-finite value in table column `{0}`")]
    NonFinite(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
