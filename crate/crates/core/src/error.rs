use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("q-integer ({p})_q vanishes; representation matrices are undefined at this q")]
    NonGenericParameter { p: u32 },

    #[error("q must be nonzero")]
    ZeroParameter,

    #[error("dimension {dim} exceeds the configured cap {cap}")]
    CapacityExceeded { dim: u128, cap: usize },

    #[error("the cyclic element X = sigma_1 ... sigma_n is not invertible")]
    SingularConjugator,

    #[error("wedge of eigenvectors {indices:?} is numerically zero")]
    DegenerateWedge { indices: Vec<usize> },

    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("eigensolver failed: {0}")]
    Eigen(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
