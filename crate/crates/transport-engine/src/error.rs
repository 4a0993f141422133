use gge_states::GgeError;
use hermitian_core::LinalgError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TransportError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Gge(#[from] GgeError),
    #[error("unitary check failed: ‖U†U − I‖ = {0:e}")]
    NonUnitary(f64),
    #[error("collision does not preserve the charges: residual {residual:e} above {tolerance:e}")]
    NotChargePreserving { residual: f64, tolerance: f64 },
    #[error("charge {index} has dimension {found}, expected {expected}")]
    ChargeDimension {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("expected {expected} affinities, got {found}")]
    AffinityCount { expected: usize, found: usize },
    #[error("setup has no charges")]
    NoCharges,
    #[error("finite-difference step must be positive, got {0}")]
    InvalidStep(f64),
    #[error("affinity gradient is zero")]
    ZeroGradient,
    #[error("coefficient matrix is singular")]
    SingularTransform,
    #[error("series outside its convergence region: spread {spread:.4} ≥ {radius:.4}")]
    SeriesOutsideConvergence { spread: f64, radius: f64 },
    #[error("conjugation basis is not unitary (residual {0:e})")]
    BasisNotUnitary(f64),
    #[error("starred setup is invalid: {0}")]
    InvalidStarred(String),
}

pub type Result<T> = std::result::Result<T, TransportError>;
