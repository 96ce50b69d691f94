use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("invalid bimodule: {0}")]
    InvalidBimodule(String),
    #[error("algebra mismatch: {0}")]
    AlgebraMismatch(String),
    #[error("not a bimodule map: {0}")]
    NotBimoduleMap(String),
    #[error("Leibniz rule violated: {0}")]
    Leibniz(String),
    #[error("not idempotent: {0}")]
    NotIdempotent(String),
    #[error("not an automorphism: {0}")]
    NotAutomorphism(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("identity failed: {0}")]
    IdentityFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
