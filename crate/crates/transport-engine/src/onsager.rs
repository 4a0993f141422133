use gge_states::AffinityVector;
use hermitian_core::sparse::{self, SparseCMat};
use hermitian_core::trace_product;
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::collide::exact_currents;
use crate::error::{Result, TransportError};
use crate::frame::JointFrame;
use crate::setup::CollisionSetup;
use crate::sld::sld_from_state;

/// Default affinity step for finite differences.
pub const DEFAULT_FD_STEP: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OnsagerMethod {
    YCov,
    Sld,
    FiniteDifference,
}

impl OnsagerMethod {
    pub fn name(self) -> &'static str {
        match self {
            Self::YCov => "ycov",
            Self::Sld => "sld",
            Self::FiniteDifference => "fd",
        }
    }
}

/// Finite-difference stencil for the current slopes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FdScheme {
    /// `J(h e_ℓ) / h`, first order.
    Forward,
    /// `(J(h e_ℓ) − J(−h e_ℓ)) / 2h`, second order.
    Central,
    /// Richardson extrapolation of the central stencil, fourth order.
    Richardson,
}

/// Classical and quantum parts of the entropy production for one gradient.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropySplit {
    /// `½ ∫ cov_y(D, D) dy`.
    pub sigma: f64,
    /// `½ var(D)` over the global equilibrium state.
    pub classical: f64,
    /// `½ ∫ I_y(π, D) dy`.
    pub quantum: f64,
    /// `quantum / sigma`; `None` for a vanishing gradient.
    pub r: Option<f64>,
    /// `½⟨D²⟩ / sigma − 1`.
    pub r_from_second_moment: Option<f64>,
    /// `½⟨D²⟩`, an upper bound on `sigma`.
    pub half_second_moment: f64,
    /// `|classical − quantum − sigma|`.
    pub split_residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OnsagerReport {
    pub method: OnsagerMethod,
    pub l: DMatrix<f64>,
    /// `max |L_kl − L_lk|`.
    pub symmetry_residual: f64,
    /// Smallest eigenvalue of `(L + Lᵀ)/2`.
    pub min_eigenvalue: f64,
    /// Response matrix before symmetrization, when the method provides one.
    pub unsymmetrized: Option<DMatrix<f64>>,
    pub entropy: Option<EntropySplit>,
}

impl OnsagerReport {
    pub fn new(method: OnsagerMethod, l: DMatrix<f64>) -> Self {
        let symmetry_residual = l
            .iter()
            .zip(l.transpose().iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let sym = (&l + l.transpose()) * 0.5;
        let min_eigenvalue = SymmetricEigen::new(sym).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
        Self {
            method,
            l,
            symmetry_residual,
            min_eigenvalue,
            unsymmetrized: None,
            entropy: None,
        }
    }

    pub fn with_entropy(mut self, split: EntropySplit) -> Self {
        self.entropy = Some(split);
        self
    }

    /// `‖L‖_max`.
    pub fn norm_max(&self) -> f64 {
        self.l.iter().fold(0.0, |a, b| a.max(b.abs()))
    }

    /// `δλ · L · δλ`.
    pub fn quadratic_form(&self, delta: &[f64]) -> f64 {
        let v = DVector::from_column_slice(delta);
        (v.transpose() * &self.l * &v)[(0, 0)]
    }
}

struct EigenCharges {
    frame: JointFrame,
    delta: Vec<SparseCMat>,
}

fn eigen_charges(setup: &CollisionSetup, lambda: &AffinityVector) -> Result<EigenCharges> {
    setup.require_valid()?;
    let s1 = setup.state_first(lambda)?;
    let s2 = setup.state_second(lambda)?;
    let frame = JointFrame::new(&s1, &s2);
    let delta = (0..setup.num_charges())
        .map(|k| frame.to_eigenbasis(setup.delta_first(k)))
        .collect::<Result<Vec<_>>>()?;
    Ok(EigenCharges { frame, delta })
}

/// `L_kl = ½ ∫₀¹ cov_y(ΔQ_k, ΔQ_l) dy` at `π = π_λ⊗π_λ`, together with the
/// unsymmetrized response `−∫ tr[ΔQ_k π^y (Q_l⊗I − ⟨Q_l⟩) π^(1−y)] dy`.
pub fn onsager_ycov(setup: &CollisionSetup, lambda: &AffinityVector) -> Result<OnsagerReport> {
    let ec = eigen_charges(setup, lambda)?;
    let f = &ec.frame;
    let n = setup.num_charges();
    let means: Vec<f64> = ec.delta.iter().map(|x| f.mean(x)).collect();
    let mut l = DMatrix::zeros(n, n);
    for k in 0..n {
        for m in k..n {
            let s = f.weighted_overlap(&ec.delta[k], &ec.delta[m], |a, b| f.log_mean(a, b)).re;
            let v = 0.5 * (s - means[k] * means[m]);
            l[(k, m)] = v;
            l[(m, k)] = v;
        }
    }
    let unsym = unsymmetrized_with(setup, &ec)?;
    let mut report = OnsagerReport::new(OnsagerMethod::YCov, l);
    report.unsymmetrized = Some(unsym);
    Ok(report)
}

fn unsymmetrized_with(setup: &CollisionSetup, ec: &EigenCharges) -> Result<DMatrix<f64>> {
    let f = &ec.frame;
    let n = setup.num_charges();
    let lifted = (0..n)
        .map(|k| f.to_eigenbasis(setup.lifted_first(k)))
        .collect::<Result<Vec<_>>>()?;
    let mut l = DMatrix::zeros(n, n);
    for k in 0..n {
        let mk = f.mean(&ec.delta[k]);
        for m in 0..n {
            let s = f.weighted_overlap(&ec.delta[k], &lifted[m], |a, b| f.log_mean(a, b)).re;
            l[(k, m)] = -s + mk * f.mean(&lifted[m]);
        }
    }
    Ok(l)
}

/// Linear response `∂J_k/∂δλ_l` without symmetrization.
pub fn unsymmetrized_onsager(setup: &CollisionSetup, lambda: &AffinityVector) -> Result<DMatrix<f64>> {
    let ec = eigen_charges(setup, lambda)?;
    unsymmetrized_with(setup, &ec)
}

/// Onsager matrix from symmetric logarithmic derivatives:
/// `L_ki = ½⟨{ξ(Q_k) − Q_k, Λ_i}⟩_π₁` with `ξ(Q) = Tr₂[U†(Q⊗I)U (I⊗π₂)]`.
pub fn onsager_sld(setup: &CollisionSetup, lambda: &AffinityVector) -> Result<OnsagerReport> {
    setup.require_valid()?;
    let s1 = setup.state_first(lambda)?;
    let s2 = setup.state_second(lambda)?;
    let n = setup.num_charges();
    let slds: Vec<_> = setup.charges().iter().map(|p| sld_from_state(&s1, &p.first)).collect();
    let mut l = DMatrix::zeros(n, n);
    for k in 0..n {
        let xi = sparse::reduce_with_partner(setup.evolved_first(k), setup.d1(), &s2.density)?;
        let flux = xi - &setup.charges()[k].first;
        for (i, lam) in slds.iter().enumerate() {
            let anti = lam * &s1.density + &s1.density * lam;
            l[(k, i)] = 0.5 * trace_product(&flux, &anti).re;
        }
    }
    Ok(OnsagerReport::new(OnsagerMethod::Sld, l))
}

/// Onsager matrix from exact currents at small affinity offsets on subsystem 1.
pub fn onsager_finite_difference(setup: &CollisionSetup, lambda: &AffinityVector, h: f64, scheme: FdScheme) -> Result<OnsagerReport> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(TransportError::InvalidStep(h));
    }
    setup.require_valid()?;
    setup.check_affinities(lambda)?;
    let n = setup.num_charges();
    let current = |col: usize, step: f64| -> Result<Vec<f64>> {
        Ok(exact_currents(setup, &lambda.shifted(col, step), lambda)?.first)
    };
    let central = |col: usize, step: f64| -> Result<Vec<f64>> {
        let up = current(col, step)?;
        let down = current(col, -step)?;
        Ok(up.iter().zip(&down).map(|(a, b)| (a - b) / (2.0 * step)).collect())
    };
    let mut l = DMatrix::zeros(n, n);
    for col in 0..n {
        let slope: Vec<f64> = match scheme {
            FdScheme::Forward => current(col, h)?.iter().map(|j| j / h).collect(),
            FdScheme::Central => central(col, h)?,
            FdScheme::Richardson => {
                let coarse = central(col, h)?;
                let fine = central(col, 0.5 * h)?;
                fine.iter().zip(&coarse).map(|(f, c)| (4.0 * f - c) / 3.0).collect()
            }
        };
        for (row, v) in slope.into_iter().enumerate() {
            l[(row, col)] = v;
        }
    }
    Ok(OnsagerReport::new(OnsagerMethod::FiniteDifference, l))
}

fn scaled(m: &SparseCMat, s: f64) -> SparseCMat {
    let mut out = m.clone();
    for v in out.values_mut() {
        *v *= Complex64::new(s, 0.0);
    }
    out
}

/// Entropy production of the gradient `δλ` split into its classical
/// (variance) and quantum (skew information) parts.
pub fn entropy_split(setup: &CollisionSetup, lambda: &AffinityVector, delta: &[f64]) -> Result<EntropySplit> {
    if delta.len() != setup.num_charges() {
        return Err(TransportError::AffinityCount {
            expected: setup.num_charges(),
            found: delta.len(),
        });
    }
    let ec = eigen_charges(setup, lambda)?;
    let f = &ec.frame;
    let mut d = scaled(&ec.delta[0], delta[0]);
    for (x, s) in ec.delta.iter().zip(delta).skip(1) {
        d = &d + &scaled(x, *s);
    }
    let p = f.populations();
    let mean = f.mean(&d);
    let sigma = 0.5 * (f.weighted_norm(&d, |a, b| f.log_mean(a, b)) - mean * mean);
    let second = f.weighted_norm(&d, |a, _| p[a]);
    let classical = 0.5 * (second - mean * mean);
    let quantum = 0.25 * f.weighted_norm(&d, |a, b| p[a] + p[b] - 2.0 * f.log_mean(a, b));
    let zero = delta.iter().all(|v| *v == 0.0);
    let (r, r2) = if zero || sigma == 0.0 {
        (None, None)
    } else {
        (Some(quantum / sigma), Some(0.5 * second / sigma - 1.0))
    };
    Ok(EntropySplit {
        sigma,
        classical,
        quantum,
        r,
        r_from_second_moment: r2,
        half_second_moment: 0.5 * second,
        split_residual: (classical - quantum - sigma).abs(),
    })
}

/// `L' = A L Aᵀ` for currents `J' = A J`.
pub fn transform_onsager(l: &DMatrix<f64>, a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if a.ncols() != l.nrows() || !l.is_square() {
        return Err(TransportError::AffinityCount {
            expected: l.nrows(),
            found: a.ncols(),
        });
    }
    Ok(a * l * a.transpose())
}

/// Affinities paired with `J' = A J`: `δλ' = A⁻ᵀ δλ`, so that `J'·δλ' = J·δλ`.
pub fn transform_affinities(delta: &DVector<f64>, a: &DMatrix<f64>) -> Result<DVector<f64>> {
    let inv = a.clone().try_inverse().ok_or(TransportError::SingularTransform)?;
    if inv.iter().any(|v| !v.is_finite()) {
        return Err(TransportError::SingularTransform);
    }
    Ok(inv.transpose() * delta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{partial_swap, qubit_setup, sz};
    use crate::setup::ChargePair;

    fn lam(v: &[f64]) -> AffinityVector {
        AffinityVector::new(v.to_vec()).unwrap()
    }

    fn max_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
        (a - b).iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    #[test]
    fn three_routes_agree_for_noncommuting_qubits() {
        let setup = qubit_setup(0.6);
        let l = lam(&[0.7, 0.3]);
        let y = onsager_ycov(&setup, &l).unwrap();
        let s = onsager_sld(&setup, &l).unwrap();
        let fd = onsager_finite_difference(&setup, &l, DEFAULT_FD_STEP, FdScheme::Richardson).unwrap();
        assert!(max_diff(&y.l, &s.l) < 1e-13, "{} vs {}", y.l, s.l);
        assert!(max_diff(&y.l, &fd.l) < 1e-9, "{} vs {}", y.l, fd.l);
        assert!(y.min_eigenvalue > 0.0);
        assert!(max_diff(&y.l, y.unsymmetrized.as_ref().unwrap()) < 1e-13);
    }

    #[test]
    fn identity_collision_has_no_response() {
        let setup = qubit_setup(0.0);
        let r = onsager_ycov(&setup, &lam(&[0.4, -0.2])).unwrap();
        assert!(r.norm_max() < 1e-15);
        let split = entropy_split(&setup, &lam(&[0.4, -0.2]), &[0.1, 0.2]).unwrap();
        assert!(split.r.is_none());
    }

    #[test]
    fn commuting_charge_is_purely_classical() {
        let charges = vec![ChargePair::symmetric("sz", sz())];
        let setup = CollisionSetup::from_dense(2, 2, charges, &partial_swap(2, 0.9)).unwrap();
        let split = entropy_split(&setup, &lam(&[0.8]), &[0.3]).unwrap();
        assert!(split.split_residual < 1e-15);
        assert!(split.quantum.abs() < 1e-16);
        let rep = onsager_ycov(&setup, &lam(&[0.8])).unwrap();
        assert!((rep.quadratic_form(&[0.3]) - split.sigma).abs() < 1e-15);
    }

    #[test]
    fn split_is_consistent_for_noncommuting_charges() {
        let setup = qubit_setup(0.4);
        let split = entropy_split(&setup, &lam(&[0.5, 0.9]), &[0.2, -0.1]).unwrap();
        assert!(split.split_residual < 1e-15);
        assert!(split.quantum > 0.0);
        let (r, r2) = (split.r.unwrap(), split.r_from_second_moment.unwrap());
        assert!((r - r2).abs() < 1e-12);
        assert!(split.sigma <= split.half_second_moment);
    }

    #[test]
    fn forward_difference_is_first_order() {
        let setup = qubit_setup(0.6);
        let l = lam(&[0.7, 0.3]);
        let exact = onsager_ycov(&setup, &l).unwrap().l;
        let e1 = max_diff(&onsager_finite_difference(&setup, &l, 1e-3, FdScheme::Forward).unwrap().l, &exact);
        let e2 = max_diff(&onsager_finite_difference(&setup, &l, 5e-4, FdScheme::Forward).unwrap().l, &exact);
        let order = (e1 / e2).log2();
        assert!((order - 1.0).abs() < 0.05, "order {order}");
    }

    #[test]
    fn rejects_bad_step() {
        let setup = qubit_setup(0.6);
        let err = onsager_finite_difference(&setup, &lam(&[0.1, 0.1]), 0.0, FdScheme::Central).unwrap_err();
        assert!(matches!(err, TransportError::InvalidStep(_)));
    }

    #[test]
    fn affinity_transform_preserves_entropy_production() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, -0.4, 0.0, 1.0]);
        let delta = DVector::from_column_slice(&[0.3, -0.7]);
        let j = DVector::from_column_slice(&[1.1, 0.2]);
        let dp = transform_affinities(&delta, &a).unwrap();
        let jp = &a * &j;
        assert!((dp.dot(&jp) - delta.dot(&j)).abs() < 1e-15);
        let singular = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        assert!(transform_affinities(&delta, &singular).is_err());
        let l = DMatrix::from_row_slice(2, 2, &[2.0, 0.5, 0.5, 1.0]);
        let lp = transform_onsager(&l, &a).unwrap();
        assert!(((&lp * &dp).dot(&dp) - (&l * &delta).dot(&delta)).abs() < 1e-14);
    }
}
