//! Onsager-Casimir reciprocity under an antiunitary time reversal.
//!
//! Time reversal acts locally as `Θ_j = B_j K B_j†`, with `K` complex
//! conjugation in the computational basis and `B_j` unitary. For charges
//! that are even under Θ, the response of `U` and that of the reversed
//! protocol `U_* = Θ U† Θ⁻¹` satisfy `L_kl(U) = L_lk(U_*)`.

use gge_states::AffinityVector;
use hermitian_core::sparse::{self, SparseCMat};
use hermitian_core::{kron, unitarity_residual, CMat};
use nalgebra::DMatrix;

use crate::error::{Result, TransportError};
use crate::onsager::unsymmetrized_onsager;
use crate::setup::CollisionSetup;

const BASIS_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct TimeReversalSpec {
    basis1: CMat,
    basis2: CMat,
    starred: Option<SparseCMat>,
}

impl TimeReversalSpec {
    /// `starred` overrides the reversed protocol; by default it is `Θ U† Θ⁻¹`.
    pub fn new(basis1: CMat, basis2: CMat, starred: Option<SparseCMat>) -> Result<Self> {
        for b in [&basis1, &basis2] {
            hermitian_core::require_square(b)?;
            let r = unitarity_residual(b);
            if r > BASIS_TOL {
                return Err(TransportError::BasisNotUnitary(r));
            }
        }
        if let Some(s) = &starred {
            let n = basis1.nrows() * basis2.nrows();
            if s.nrows() != n || s.ncols() != n {
                return Err(TransportError::InvalidStarred(format!(
                    "expected {n}x{n}, found {}x{}",
                    s.nrows(),
                    s.ncols()
                )));
            }
        }
        Ok(Self { basis1, basis2, starred })
    }

    /// Plain complex conjugation on both subsystems; the reversed protocol is `Uᵀ`.
    pub fn from_conjugation(d1: usize, d2: usize) -> Self {
        Self {
            basis1: CMat::identity(d1, d1),
            basis2: CMat::identity(d2, d2),
            starred: None,
        }
    }

    fn joint_basis(&self) -> SparseCMat {
        sparse::kron(&self.basis1, &self.basis2)
    }

    /// `Θ X Θ⁻¹ = B conj(B† X B) B†` for a joint operator.
    pub fn apply(&self, x: &SparseCMat) -> SparseCMat {
        let b = self.joint_basis();
        let mut inner = sparse::conjugate(x, &b);
        for v in inner.values_mut() {
            *v = v.conj();
        }
        sparse::conjugate(&inner, &sparse::adjoint(&b))
    }

    /// `U_*`, either supplied or `Θ U† Θ⁻¹`.
    pub fn starred(&self, u: &SparseCMat) -> SparseCMat {
        match &self.starred {
            Some(s) => s.clone(),
            None => self.apply(&sparse::adjoint(u)),
        }
    }

    /// `max |Θ Q Θ⁻¹ − Q|` over all lifted charges.
    pub fn charge_parity_residual(&self, setup: &CollisionSetup) -> f64 {
        let (d1, d2) = (setup.d1(), setup.d2());
        let mut worst: f64 = 0.0;
        for pair in setup.charges() {
            let lifted = kron(&pair.first, &CMat::identity(d2, d2)) + kron(&CMat::identity(d1, d1), &pair.second);
            let s = sparse::to_sparse(&lifted);
            let diff = &self.apply(&s) - &s;
            worst = worst.max(sparse::max_abs(&diff));
        }
        worst
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CasimirReport {
    /// `max |L(U) − L(U_*)ᵀ|`.
    pub residual: f64,
    /// `max |L(U) − L(U)ᵀ|`.
    pub symmetry_residual: f64,
    /// `max |Θ Q Θ⁻¹ − Q|`; reciprocity requires even charges.
    pub charge_parity_residual: f64,
    /// Unsymmetrized response of `U`.
    pub l: DMatrix<f64>,
    /// Unsymmetrized response of `U_*`.
    pub l_starred: DMatrix<f64>,
}

fn max_abs_real(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |a, b| a.max(b.abs()))
}

/// Compares the response of `U` with the transposed response of `U_*`.
pub fn onsager_casimir_check(setup: &CollisionSetup, lambda: &AffinityVector, spec: &TimeReversalSpec) -> Result<CasimirReport> {
    if spec.basis1.nrows() != setup.d1() || spec.basis2.nrows() != setup.d2() {
        return Err(TransportError::InvalidStarred(format!(
            "time-reversal bases are {}x{}, setup is {}x{}",
            spec.basis1.nrows(),
            spec.basis2.nrows(),
            setup.d1(),
            setup.d2()
        )));
    }
    let starred = spec.starred(setup.unitary());
    let reversed = CollisionSetup::new(
        setup.d1(),
        setup.d2(),
        setup.charges().to_vec(),
        starred,
        setup.options().clone(),
    )?;
    let l = unsymmetrized_onsager(setup, lambda)?;
    let l_starred = unsymmetrized_onsager(&reversed, lambda)?;
    let residual = max_abs_real(&(&l - l_starred.transpose()));
    let symmetry_residual = max_abs_real(&(&l - l.transpose()));
    Ok(CasimirReport {
        residual,
        symmetry_residual,
        charge_parity_residual: spec.charge_parity_residual(setup),
        l,
        l_starred,
    })
}
