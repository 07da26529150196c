use crate::hilbert::BasisState;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("state {state} is not part of the N = {n_total} basis")]
    NotInBasis { state: BasisState, n_total: usize },

    #[error("vector has length {got}, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("state norm is {norm}, expected a unit vector")]
    NotNormalized { norm: f64 },

    #[error("eigensolver failed: {0}")]
    NoConvergence(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Numeric failures map to a distinct CLI exit status.
    pub fn is_numeric(&self) -> bool {
        matches!(self, Error::NoConvergence(_))
    }
}
