use gge_states::{AffinityVector, GgeState};
use hermitian_core::sparse::{self, SparseCMat};
use hermitian_core::{eig_hermitian, trace_product, CMat, Keep, EIGENVALUE_FLOOR};

use crate::error::Result;
use crate::setup::CollisionSetup;

/// Currents per collision, measured on both subsystems.
#[derive(Debug, Clone, PartialEq)]
pub struct CurrentVector {
    /// `⟨Q_k⁽¹⁾⟩_final − ⟨Q_k⁽¹⁾⟩_initial`.
    pub first: Vec<f64>,
    /// The same change on subsystem 2; equals `−first` when charges are conserved.
    pub second: Vec<f64>,
}

impl CurrentVector {
    pub fn values(&self) -> &[f64] {
        &self.first
    }

    /// `max_k |J_k⁽¹⁾ + J_k⁽²⁾|`.
    pub fn conservation_residual(&self) -> f64 {
        self.first
            .iter()
            .zip(&self.second)
            .map(|(a, b)| (a + b).abs())
            .fold(0.0, f64::max)
    }
}

/// Result of one collision between fresh reservoir units.
#[derive(Debug, Clone)]
pub struct CollisionOutcome {
    pub initial_first: GgeState,
    pub initial_second: GgeState,
    /// `U (π₁⊗π₂) U†`.
    pub final_state: SparseCMat,
    pub final_first: CMat,
    pub final_second: CMat,
    pub currents: CurrentVector,
    /// `λ1 − λ2`.
    pub delta_lambda: Vec<f64>,
    /// `Σ_k δλ_k J_k`.
    pub sigma: f64,
}

fn sigma_from(delta: &[f64], currents: &[f64]) -> f64 {
    delta.iter().zip(currents).map(|(a, b)| a * b).sum()
}

/// Applies the collision map to `π_{λ1}⊗π_{λ2}`.
pub fn collide(setup: &CollisionSetup, lambda1: &AffinityVector, lambda2: &AffinityVector) -> Result<CollisionOutcome> {
    setup.require_valid()?;
    let s1 = setup.state_first(lambda1)?;
    let s2 = setup.state_second(lambda2)?;
    let rho0 = sparse::kron(&s1.density, &s2.density);
    let u = setup.unitary();
    let rho = &(u * &rho0) * &sparse::adjoint(u);
    let (d1, d2) = (setup.d1(), setup.d2());
    let r1 = sparse::partial_trace(&rho, d1, d2, Keep::First)?;
    let r2 = sparse::partial_trace(&rho, d1, d2, Keep::Second)?;
    let mut first = Vec::with_capacity(setup.num_charges());
    let mut second = Vec::with_capacity(setup.num_charges());
    for pair in setup.charges() {
        first.push((trace_product(&r1, &pair.first) - trace_product(&s1.density, &pair.first)).re);
        second.push((trace_product(&r2, &pair.second) - trace_product(&s2.density, &pair.second)).re);
    }
    let delta_lambda = lambda1.minus(lambda2);
    let sigma = sigma_from(&delta_lambda, &first);
    Ok(CollisionOutcome {
        initial_first: s1,
        initial_second: s2,
        final_state: rho,
        final_first: r1,
        final_second: r2,
        currents: CurrentVector { first, second },
        delta_lambda,
        sigma,
    })
}

/// Currents from the Heisenberg-picture charges, `J_k = tr[(U†Q_kU − Q_k)(π₁⊗π₂)]`.
///
/// Equivalent to [`collide`] but never forms the joint state.
pub fn exact_currents(setup: &CollisionSetup, lambda1: &AffinityVector, lambda2: &AffinityVector) -> Result<CurrentVector> {
    setup.require_valid()?;
    let s1 = setup.state_first(lambda1)?;
    let s2 = setup.state_second(lambda2)?;
    currents_for_states(setup, &s1.density, &s2.density)
}

pub(crate) fn currents_for_states(setup: &CollisionSetup, rho1: &CMat, rho2: &CMat) -> Result<CurrentVector> {
    let mut first = Vec::with_capacity(setup.num_charges());
    let mut second = Vec::with_capacity(setup.num_charges());
    for k in 0..setup.num_charges() {
        first.push(sparse::trace_with_product(setup.delta_first(k), rho1, rho2)?.re);
        second.push(sparse::trace_with_product(setup.delta_second(k), rho1, rho2)?.re);
    }
    Ok(CurrentVector { first, second })
}

/// Terms of the informational form of the entropy production.
#[derive(Debug, Clone, PartialEq)]
pub struct InformationalEntropy {
    /// `I(ρ') + S(ρ'₁‖π₁) + S(ρ'₂‖π₂)`.
    pub sigma: f64,
    /// `S(ρ'₁) − S(π₁)`.
    pub delta_s1: f64,
    /// `S(ρ'₂) − S(π₂)`.
    pub delta_s2: f64,
    pub relative_entropy_first: f64,
    pub relative_entropy_second: f64,
    pub mutual_information: f64,
}

fn von_neumann(rho: &CMat) -> Result<f64> {
    let e = eig_hermitian(rho)?;
    Ok(e.eigenvalues
        .iter()
        .filter(|p| **p > EIGENVALUE_FLOOR)
        .map(|p| -p * p.ln())
        .sum())
}

/// `S(ρ‖π)` using `ln π = −Σ λ_k Q_k − ln Z`.
fn relative_to_gge(rho: &CMat, s_rho: f64, state: &GgeState, charges: &[&CMat]) -> f64 {
    let mut cross = -state.log_partition;
    for (q, l) in charges.iter().zip(state.affinities.values()) {
        cross -= l * trace_product(rho, q).re;
    }
    -s_rho - cross
}

/// Entropy production from entropies and correlations of the final state.
///
/// The joint entropy uses unitary invariance, `S(ρ') = S(π₁) + S(π₂)`.
pub fn entropy_informational(
    setup: &CollisionSetup,
    lambda1: &AffinityVector,
    lambda2: &AffinityVector,
) -> Result<InformationalEntropy> {
    let out = collide(setup, lambda1, lambda2)?;
    let s1_final = von_neumann(&out.final_first)?;
    let s2_final = von_neumann(&out.final_second)?;
    let s1_init = out.initial_first.entropy();
    let s2_init = out.initial_second.entropy();
    let firsts: Vec<&CMat> = setup.charges().iter().map(|p| &p.first).collect();
    let seconds: Vec<&CMat> = setup.charges().iter().map(|p| &p.second).collect();
    let rel1 = relative_to_gge(&out.final_first, s1_final, &out.initial_first, &firsts);
    let rel2 = relative_to_gge(&out.final_second, s2_final, &out.initial_second, &seconds);
    let mutual = s1_final + s2_final - (s1_init + s2_init);
    Ok(InformationalEntropy {
        sigma: mutual + rel1 + rel2,
        delta_s1: s1_final - s1_init,
        delta_s2: s2_final - s2_init,
        relative_entropy_first: rel1,
        relative_entropy_second: rel2,
        mutual_information: mutual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{partial_swap, qubit_setup, swap};
    use crate::setup::ChargePair;
    use crate::testutil::sz;
    use hermitian_core::max_abs;

    fn lam(v: &[f64]) -> AffinityVector {
        AffinityVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn heisenberg_and_schrodinger_currents_agree() {
        let setup = qubit_setup(0.5);
        let (l1, l2) = (lam(&[0.9, 0.2]), lam(&[0.3, -0.4]));
        let out = collide(&setup, &l1, &l2).unwrap();
        let fast = exact_currents(&setup, &l1, &l2).unwrap();
        for (a, b) in out.currents.first.iter().zip(&fast.first) {
            assert!((a - b).abs() < 1e-15);
        }
        assert!(out.currents.conservation_residual() < 1e-15);
        assert!(fast.conservation_residual() < 1e-15);
    }

    #[test]
    fn full_swap_exchanges_states() {
        let charges = vec![ChargePair::symmetric("sz", sz())];
        let setup = CollisionSetup::from_dense(2, 2, charges, &swap(2)).unwrap();
        let out = collide(&setup, &lam(&[0.7]), &lam(&[-0.2])).unwrap();
        assert!(max_abs(&(&out.final_first - &out.initial_second.density)) < 1e-15);
        assert!(max_abs(&(&out.final_second - &out.initial_first.density)) < 1e-15);
    }

    #[test]
    fn informational_entropy_equals_flux_form() {
        let setup = qubit_setup(0.8);
        let (l1, l2) = (lam(&[1.1, 0.4]), lam(&[0.2, -0.3]));
        let info = entropy_informational(&setup, &l1, &l2).unwrap();
        let out = collide(&setup, &l1, &l2).unwrap();
        assert!((info.sigma - out.sigma).abs() < 1e-14, "{} vs {}", info.sigma, out.sigma);
        assert!(info.sigma > 0.0);
        assert!(info.mutual_information >= -1e-15);
    }

    #[test]
    fn equal_affinities_give_no_current() {
        let setup = CollisionSetup::from_dense(
            2,
            2,
            vec![ChargePair::symmetric("sz", sz())],
            &partial_swap(2, 0.3),
        )
        .unwrap();
        let j = exact_currents(&setup, &lam(&[0.6]), &lam(&[0.6])).unwrap();
        assert!(j.first[0].abs() < 1e-16);
    }
}
