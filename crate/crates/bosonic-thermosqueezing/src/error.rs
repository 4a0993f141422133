use gge_states::GgeError;
use hermitian_core::LinalgError;
use thiserror::Error;
use transport_engine::TransportError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BosonicError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Gge(#[from] GgeError),
    #[error(transparent)]
    Transport(#[from] TransportError),
    #[error("Fock dimension must be at least 2, got {0}")]
    InvalidDimension(usize),
    #[error("invalid {name} = {value}")]
    InvalidParameter { name: &'static str, value: f64 },
    #[error("squeezing potential |mu| = {0} must be below 1")]
    MuOutOfRange(f64),
    #[error("matrix is not symplectic (residual {0:e})")]
    NotSymplectic(f64),
    #[error("truncation leakage {leakage:e} exceeds {tolerance:e}; raise the Fock dimension")]
    Leakage { leakage: f64, tolerance: f64 },
    #[error("{0} undefined without squeezing")]
    NoSqueezing(&'static str),
}

pub type Result<T> = std::result::Result<T, BosonicError>;
