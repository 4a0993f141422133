//! Complex-matrix building blocks for operators on finite-dimensional Hilbert
//! spaces.
//!
//! Composite systems use a single index convention throughout: for a joint
//! space of dimension `d1 * d2` the basis state `(i, k)` has index `i * d2 + k`,
//! so subsystem 1 is the slow index. [`kron`] and [`partial_trace`] both
//! follow it, as do the sparse helpers in [`sparse`].

pub mod eigen;
pub mod logmean;
pub mod ops;
pub mod sparse;

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

pub use eigen::{eig_hermitian, frac_power, mat_func_hermitian, unitary_exp, EigenDecomposition};
pub use logmean::{log_mean, log_mean_ln};
pub use ops::{
    anticommutator, commutator, hermiticity_residual, kron, kron_conjugate, max_abs, partial_trace, symmetrize,
    trace_product, unitarity_residual, Keep,
};
pub use sparse::SparseCMat;

/// Dense complex matrix.
pub type CMat = DMatrix<Complex64>;

/// Smallest eigenvalue admitted before logarithms and fractional powers.
pub const EIGENVALUE_FLOOR: f64 = 1e-300;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("eigen-solver did not converge on a {0}x{0} matrix")]
    NoConvergence(usize),
    #[error("function is not finite at eigenvalue {0}")]
    UndefinedAt(f64),
}

pub type Result<T> = std::result::Result<T, LinalgError>;

pub fn require_square(m: &CMat) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(LinalgError::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(m.nrows())
}

/// Shorthand for a real number as a complex scalar.
#[inline]
pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}
