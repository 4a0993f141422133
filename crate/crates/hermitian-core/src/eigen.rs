//! Hermitian eigendecomposition and spectral matrix functions.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::ops::symmetrize;
use crate::{require_square, CMat, LinalgError, Result, EIGENVALUE_FLOOR};

const SOLVER_EPS: f64 = 1e-15;
const SOLVER_MAX_ITER: usize = 0;

/// Spectrum of a Hermitian matrix, eigenvalues in ascending order with the
/// matching unit eigenvectors stored as columns.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    pub eigenvalues: DVector<f64>,
    pub eigenvectors: CMat,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `V diag(p) V†`.
    pub fn reconstruct(&self) -> CMat {
        self.map_complex(|x| Complex64::new(x, 0.0))
    }

    /// `V diag(f(p)) V†` for a real function, rejecting non-finite values.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<CMat> {
        let mut vals = Vec::with_capacity(self.dim());
        for &p in self.eigenvalues.iter() {
            let v = f(p);
            if !v.is_finite() {
                return Err(LinalgError::UndefinedAt(p));
            }
            vals.push(Complex64::new(v, 0.0));
        }
        Ok(symmetrize(&self.apply_diagonal(&vals)))
    }

    /// `V diag(f(p)) V†` for a complex-valued function.
    pub fn map_complex(&self, f: impl Fn(f64) -> Complex64) -> CMat {
        let vals: Vec<Complex64> = self.eigenvalues.iter().map(|&p| f(p)).collect();
        self.apply_diagonal(&vals)
    }

    fn apply_diagonal(&self, vals: &[Complex64]) -> CMat {
        let v = &self.eigenvectors;
        let mut scaled = v.clone();
        for (j, mut col) in scaled.column_iter_mut().enumerate() {
            col *= vals[j];
        }
        scaled * v.adjoint()
    }

    /// Expresses `m` in the eigenbasis: `V† m V`.
    pub fn to_eigenbasis(&self, m: &CMat) -> CMat {
        self.eigenvectors.adjoint() * m * &self.eigenvectors
    }

    /// Inverse of [`Self::to_eigenbasis`].
    pub fn from_eigenbasis(&self, m: &CMat) -> CMat {
        &self.eigenvectors * m * self.eigenvectors.adjoint()
    }
}

/// Diagonalizes a Hermitian matrix after symmetrizing it.
///
/// Matrices whose off-diagonal entries are exactly zero are handled by
/// sorting, which returns permutation eigenvectors without round-off.
pub fn eig_hermitian(m: &CMat) -> Result<EigenDecomposition> {
    let n = require_square(m)?;
    let h = symmetrize(m);
    let is_diagonal = (0..n).all(|j| (0..n).all(|i| i == j || h[(i, j)] == Complex64::new(0.0, 0.0)));
    let (values, vectors) = if is_diagonal {
        let values: Vec<f64> = (0..n).map(|i| h[(i, i)].re).collect();
        (values, CMat::identity(n, n))
    } else {
        let eig = h
            .try_symmetric_eigen(SOLVER_EPS, SOLVER_MAX_ITER)
            .ok_or(LinalgError::NoConvergence(n))?;
        (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
    };
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let eigenvalues = DVector::from_iterator(n, order.iter().map(|&i| values[i]));
    let mut eigenvectors = CMat::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        eigenvectors.set_column(dst, &vectors.column(src));
    }
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// Applies a real scalar function to a Hermitian matrix through its spectrum.
pub fn mat_func_hermitian(m: &CMat, f: impl Fn(f64) -> f64) -> Result<CMat> {
    eig_hermitian(m)?.map(f)
}

/// `rho^y` for a positive semidefinite matrix, eigenvalues clamped at
/// [`EIGENVALUE_FLOOR`].
pub fn frac_power(rho: &CMat, y: f64) -> Result<CMat> {
    mat_func_hermitian(rho, |p| p.max(EIGENVALUE_FLOOR).powf(y))
}

/// `exp(-i t h)` for Hermitian `h`.
pub fn unitary_exp(h: &CMat, t: f64) -> Result<CMat> {
    let eig = eig_hermitian(h)?;
    Ok(eig.map_complex(|e| Complex64::from_polar(1.0, -t * e)))
}
