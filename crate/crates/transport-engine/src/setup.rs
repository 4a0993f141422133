use gge_states::{AffinityVector, GgeState};
use hermitian_core::sparse::{self, SparseCMat};
use hermitian_core::{hermiticity_residual, max_abs, symmetrize, CMat};

use crate::error::{Result, TransportError};

const UNITARY_TOL: f64 = 1e-10;
const HERMITIAN_TOL: f64 = 1e-12;

/// Matching charges on the two subsystems.
#[derive(Debug, Clone, PartialEq)]
pub struct ChargePair {
    pub label: String,
    pub first: CMat,
    pub second: CMat,
}

impl ChargePair {
    pub fn new(label: impl Into<String>, first: CMat, second: CMat) -> Self {
        Self {
            label: label.into(),
            first,
            second,
        }
    }

    /// Same local operator on both sides.
    pub fn symmetric(label: impl Into<String>, q: CMat) -> Self {
        Self::new(label, q.clone(), q)
    }
}

/// Knobs for setup validation.
#[derive(Debug, Clone, PartialEq)]
pub struct SetupOptions {
    /// Relative tolerance on `‖[U, Q_tot]‖_max / ‖Q_tot‖_max`.
    pub tolerance: f64,
    /// Joint basis states on which preservation is checked; all when `None`.
    pub sector: Option<Vec<bool>>,
}

impl Default for SetupOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-8,
            sector: None,
        }
    }
}

/// Per-charge commutator residuals.
#[derive(Debug, Clone, PartialEq)]
pub struct PreservationReport {
    pub labels: Vec<String>,
    /// `‖[U, Q_k⊗I + I⊗Q_k]‖_max`, restricted to the sector when one is set.
    pub residuals: Vec<f64>,
    /// `‖Q_k⊗I + I⊗Q_k‖_max`.
    pub scales: Vec<f64>,
    pub tolerance: f64,
    pub valid: bool,
}

impl PreservationReport {
    pub fn max_relative(&self) -> f64 {
        self.residuals
            .iter()
            .zip(&self.scales)
            .map(|(r, s)| if *s > 0.0 { r / s } else { *r })
            .fold(0.0, f64::max)
    }
}

/// Two subsystems, their charges and the collision unitary.
#[derive(Debug, Clone)]
pub struct CollisionSetup {
    d1: usize,
    d2: usize,
    charges: Vec<ChargePair>,
    unitary: SparseCMat,
    options: SetupOptions,
    lifted_first: Vec<SparseCMat>,
    lifted_second: Vec<SparseCMat>,
    delta_first: Vec<SparseCMat>,
    delta_second: Vec<SparseCMat>,
    evolved_first: Vec<SparseCMat>,
    preservation: PreservationReport,
    unitarity_residual: f64,
}

impl CollisionSetup {
    /// Validates dimensions, Hermiticity and unitarity, and records the
    /// charge-preservation report. Setups that fail preservation are still
    /// constructed; operations that need conserved charges refuse them.
    pub fn new(d1: usize, d2: usize, charges: Vec<ChargePair>, unitary: SparseCMat, options: SetupOptions) -> Result<Self> {
        if charges.is_empty() {
            return Err(TransportError::NoCharges);
        }
        let n = d1 * d2;
        for (index, pair) in charges.iter().enumerate() {
            for (m, d) in [(&pair.first, d1), (&pair.second, d2)] {
                if m.nrows() != d || m.ncols() != d {
                    return Err(TransportError::ChargeDimension {
                        index,
                        expected: d,
                        found: m.nrows(),
                    });
                }
                let r = hermiticity_residual(m);
                if r > HERMITIAN_TOL * max_abs(m).max(1.0) {
                    return Err(gge_states::GgeError::NotHermitian {
                        label: pair.label.clone(),
                        residual: r,
                    }
                    .into());
                }
            }
        }
        if unitary.nrows() != n || unitary.ncols() != n {
            return Err(TransportError::ChargeDimension {
                index: usize::MAX,
                expected: n,
                found: unitary.nrows(),
            });
        }
        if let Some(mask) = &options.sector {
            if mask.len() != n {
                return Err(TransportError::ChargeDimension {
                    index: usize::MAX,
                    expected: n,
                    found: mask.len(),
                });
            }
        }
        let charges: Vec<ChargePair> = charges
            .into_iter()
            .map(|p| ChargePair::new(p.label, symmetrize(&p.first), symmetrize(&p.second)))
            .collect();

        let udag = sparse::adjoint(&unitary);
        let gram = &udag * &unitary;
        let unitarity_residual = sparse::max_abs(&(&gram - &sparse::identity(n)));
        if unitarity_residual > UNITARY_TOL {
            return Err(TransportError::NonUnitary(unitarity_residual));
        }

        let id1 = CMat::identity(d1, d1);
        let id2 = CMat::identity(d2, d2);
        let lifted_first: Vec<SparseCMat> = charges.iter().map(|p| sparse::kron(&p.first, &id2)).collect();
        let lifted_second: Vec<SparseCMat> = charges.iter().map(|p| sparse::kron(&id1, &p.second)).collect();
        let evolve = |q: &SparseCMat| -> SparseCMat { &udag * &(q * &unitary) };
        let evolved_first: Vec<SparseCMat> = lifted_first.iter().map(evolve).collect();
        let delta_first: Vec<SparseCMat> = evolved_first.iter().zip(&lifted_first).map(|(a, b)| a - b).collect();
        let delta_second: Vec<SparseCMat> = lifted_second.iter().map(|q| &evolve(q) - q).collect();

        let mut residuals = Vec::with_capacity(charges.len());
        let mut scales = Vec::with_capacity(charges.len());
        for (a, b) in lifted_first.iter().zip(&lifted_second) {
            let total = a + b;
            let comm = &(&unitary * &total) - &(&total * &unitary);
            let (r, s) = match &options.sector {
                Some(mask) => (sparse::max_abs_restricted(&comm, mask), sparse::max_abs(&total)),
                None => (sparse::max_abs(&comm), sparse::max_abs(&total)),
            };
            residuals.push(r);
            scales.push(s);
        }
        let valid = residuals
            .iter()
            .zip(&scales)
            .all(|(r, s)| *r <= options.tolerance * s.max(f64::MIN_POSITIVE));
        let preservation = PreservationReport {
            labels: charges.iter().map(|p| p.label.clone()).collect(),
            residuals,
            scales,
            tolerance: options.tolerance,
            valid,
        };
        Ok(Self {
            d1,
            d2,
            charges,
            unitary,
            options,
            lifted_first,
            lifted_second,
            delta_first,
            delta_second,
            evolved_first,
            preservation,
            unitarity_residual,
        })
    }

    /// Convenience constructor from a dense unitary with default options.
    pub fn from_dense(d1: usize, d2: usize, charges: Vec<ChargePair>, unitary: &CMat) -> Result<Self> {
        Self::new(d1, d2, charges, sparse::to_sparse(unitary), SetupOptions::default())
    }

    pub fn d1(&self) -> usize {
        self.d1
    }

    pub fn d2(&self) -> usize {
        self.d2
    }

    pub fn joint_dim(&self) -> usize {
        self.d1 * self.d2
    }

    pub fn num_charges(&self) -> usize {
        self.charges.len()
    }

    pub fn charges(&self) -> &[ChargePair] {
        &self.charges
    }

    pub fn unitary(&self) -> &SparseCMat {
        &self.unitary
    }

    pub fn options(&self) -> &SetupOptions {
        &self.options
    }

    pub fn preservation(&self) -> &PreservationReport {
        &self.preservation
    }

    pub fn is_valid(&self) -> bool {
        self.preservation.valid
    }

    pub fn unitarity_residual(&self) -> f64 {
        self.unitarity_residual
    }

    /// `Q_k ⊗ I`.
    pub fn lifted_first(&self, k: usize) -> &SparseCMat {
        &self.lifted_first[k]
    }

    /// `I ⊗ Q_k`.
    pub fn lifted_second(&self, k: usize) -> &SparseCMat {
        &self.lifted_second[k]
    }

    /// `U†(Q_k ⊗ I)U`.
    pub fn evolved_first(&self, k: usize) -> &SparseCMat {
        &self.evolved_first[k]
    }

    /// `U†(Q_k ⊗ I)U − Q_k ⊗ I`.
    pub fn delta_first(&self, k: usize) -> &SparseCMat {
        &self.delta_first[k]
    }

    /// `U†(I ⊗ Q_k)U − I ⊗ Q_k`.
    pub fn delta_second(&self, k: usize) -> &SparseCMat {
        &self.delta_second[k]
    }

    pub(crate) fn require_valid(&self) -> Result<()> {
        if self.preservation.valid {
            Ok(())
        } else {
            Err(TransportError::NotChargePreserving {
                residual: self.preservation.max_relative(),
                tolerance: self.preservation.tolerance,
            })
        }
    }

    pub(crate) fn check_affinities(&self, lambda: &AffinityVector) -> Result<()> {
        if lambda.len() != self.charges.len() {
            return Err(TransportError::AffinityCount {
                expected: self.charges.len(),
                found: lambda.len(),
            });
        }
        Ok(())
    }

    /// GGE of subsystem 1 at the given affinities.
    pub fn state_first(&self, lambda: &AffinityVector) -> Result<GgeState> {
        self.check_affinities(lambda)?;
        let mats: Vec<&CMat> = self.charges.iter().map(|p| &p.first).collect();
        Ok(GgeState::from_matrices(&mats, lambda)?)
    }

    /// GGE of subsystem 2 at the given affinities.
    pub fn state_second(&self, lambda: &AffinityVector) -> Result<GgeState> {
        self.check_affinities(lambda)?;
        let mats: Vec<&CMat> = self.charges.iter().map(|p| &p.second).collect();
        Ok(GgeState::from_matrices(&mats, lambda)?)
    }
}

/// Returns the preservation report computed at construction.
pub fn check_charge_preservation(setup: &CollisionSetup) -> PreservationReport {
    setup.preservation.clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{c, partial_swap, sx, sz};
    use hermitian_core::kron;

    #[test]
    fn detects_broken_preservation() {
        let u = kron(&sx(), &sx());
        let charges = vec![ChargePair::symmetric("sz", sz())];
        let setup = CollisionSetup::from_dense(2, 2, charges, &u).unwrap();
        assert!(!setup.is_valid());
        assert!(setup.preservation().max_relative() > 0.5);
        let lam = AffinityVector::new(vec![0.2]).unwrap();
        assert!(matches!(
            crate::exact_currents(&setup, &lam, &lam),
            Err(TransportError::NotChargePreserving { .. })
        ));
    }

    #[test]
    fn sector_mask_restricts_the_check() {
        let u = kron(&sx(), &sx());
        let charges = vec![ChargePair::symmetric("sz", sz())];
        let mask = vec![false, true, true, false];
        let opts = SetupOptions { tolerance: 1e-8, sector: Some(mask) };
        let setup = CollisionSetup::new(2, 2, charges, sparse::to_sparse(&u), opts).unwrap();
        assert!(setup.is_valid());
    }

    #[test]
    fn rejects_nonunitary_and_bad_dimensions() {
        let charges = vec![ChargePair::symmetric("sz", sz())];
        let u = partial_swap(2, 0.2) * c(1.1, 0.);
        assert!(matches!(
            CollisionSetup::from_dense(2, 2, charges.clone(), &u),
            Err(TransportError::NonUnitary(_))
        ));
        assert!(matches!(
            CollisionSetup::from_dense(3, 2, charges.clone(), &partial_swap(2, 0.2)),
            Err(TransportError::ChargeDimension { .. })
        ));
        assert!(matches!(
            CollisionSetup::from_dense(2, 2, vec![], &partial_swap(2, 0.2)),
            Err(TransportError::NoCharges)
        ));
        let bad = CMat::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(0., 0.), c(0., 0.)]);
        assert!(CollisionSetup::from_dense(2, 2, vec![ChargePair::symmetric("n", bad)], &partial_swap(2, 0.2)).is_err());
    }
}
