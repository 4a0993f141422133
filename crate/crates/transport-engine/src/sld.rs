//! Symmetric logarithmic derivatives of a GGE with respect to its affinities.

use gge_states::{build_gge, AffinityVector, GgeState, HermitianObservable, Subsystem};
use hermitian_core::{eig_hermitian, log_mean_ln, max_abs, symmetrize, CMat};
use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Result, TransportError};
use crate::series::sld_series_coefficients;

/// Entries below this modulus do not count toward the series spread.
const SPREAD_CUTOFF: f64 = 1e-14;

fn tanhc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 3.0
    } else {
        x.tanh() / x
    }
}

fn eigen_mean(state: &GgeState, x: &CMat) -> Complex64 {
    state
        .populations()
        .iter()
        .enumerate()
        .map(|(i, p)| x[(i, i)] * *p)
        .sum()
}

/// `∂π/∂λ` along charge `q`, from the integral representation
/// `−∫₀¹ π^y (q − ⟨q⟩) π^(1−y) dy` evaluated with logarithmic means.
pub fn gge_derivative(state: &GgeState, q: &CMat) -> CMat {
    let x = state.eig.to_eigenbasis(q);
    let mean = eigen_mean(state, &x);
    let lp = &state.ln_populations;
    let p = state.populations();
    let n = state.dim();
    let d = CMat::from_fn(n, n, |i, j| {
        let diag = if i == j { mean * p[i] } else { Complex64::new(0.0, 0.0) };
        diag - x[(i, j)] * log_mean_ln(lp[i], lp[j])
    });
    symmetrize(&state.eig.from_eigenbasis(&d))
}

/// Solves `½(Λπ + πΛ) = ∂π/∂λ` in the eigenbasis of π.
///
/// `Λ_ij = 2 (∂π)_ij / (p_i + p_j)`, written through the log-population gap
/// so that it stays finite when both populations underflow.
pub fn sld_from_state(state: &GgeState, q: &CMat) -> CMat {
    let x = state.eig.to_eigenbasis(q);
    let mean = eigen_mean(state, &x);
    let lp = &state.ln_populations;
    let n = state.dim();
    let lam = CMat::from_fn(n, n, |i, j| {
        if i == j {
            mean - x[(i, i)]
        } else {
            -x[(i, j)] * tanhc(0.5 * (lp[i] - lp[j]))
        }
    });
    symmetrize(&state.eig.from_eigenbasis(&lam))
}

/// `‖½(Λπ + πΛ) − ∂π‖_max`.
pub fn sld_relation_residual(state: &GgeState, q: &CMat, lambda_op: &CMat) -> f64 {
    let lhs = (lambda_op * &state.density + &state.density * lambda_op) * Complex64::new(0.5, 0.0);
    max_abs(&(lhs - gge_derivative(state, q)))
}

fn check_index(charges: &[HermitianObservable], i: usize) -> Result<()> {
    if i >= charges.len() {
        return Err(TransportError::AffinityCount {
            expected: charges.len(),
            found: i + 1,
        });
    }
    Ok(())
}

/// SLD of the GGE built from `charges` and `lambda`, along charge `i`.
pub fn sld(charges: &[HermitianObservable], lambda: &AffinityVector, i: usize) -> Result<HermitianObservable> {
    check_index(charges, i)?;
    let state = build_gge(charges, lambda)?;
    let op = sld_from_state(&state, charges[i].matrix());
    Ok(HermitianObservable::new(
        format!("SLD[{}]", charges[i].label()),
        charges[i].subsystem(),
        op,
    )?)
}

/// Nested-commutator form `⟨Q_i⟩ − Σ_n f_2n C^2n(Q_i)`, with `C(O) = [G, O]`
/// and `G = Σ λ_ℓ Q_ℓ`, truncated at `terms` even orders.
///
/// Refused unless every frequency `g_a − g_b` that `Q_i` connects lies
/// strictly inside the convergence radius `π`.
pub fn sld_series(charges: &[HermitianObservable], lambda: &AffinityVector, i: usize, terms: usize) -> Result<HermitianObservable> {
    check_index(charges, i)?;
    let state = build_gge(charges, lambda)?;
    let n = state.dim();
    let mut g = CMat::zeros(n, n);
    for (q, l) in charges.iter().zip(lambda.values()) {
        g += q.matrix() * Complex64::new(*l, 0.0);
    }
    let q = charges[i].matrix();
    let ge = eig_hermitian(&g)?;
    let xq = ge.to_eigenbasis(q);
    let scale = max_abs(&xq).max(f64::MIN_POSITIVE);
    let mut spread: f64 = 0.0;
    for a in 0..n {
        for b in 0..n {
            if xq[(a, b)].norm() > SPREAD_CUTOFF * scale {
                spread = spread.max((ge.eigenvalues[a] - ge.eigenvalues[b]).abs());
            }
        }
    }
    if spread >= PI {
        return Err(TransportError::SeriesOutsideConvergence { spread, radius: PI });
    }
    let f = sld_series_coefficients(terms);
    let mean = state.expectation_of(q)?;
    let mut term = q.clone();
    let mut acc = q * Complex64::new(f[0], 0.0);
    for coeff in f.iter().skip(1) {
        let once = &g * &term - &term * &g;
        term = &g * &once - &once * &g;
        acc += &term * Complex64::new(*coeff, 0.0);
    }
    let op = CMat::identity(n, n) * Complex64::new(mean, 0.0) - acc;
    Ok(HermitianObservable::new(
        format!("SLD-series[{}]", charges[i].label()),
        Subsystem::First,
        symmetrize(&op),
    )?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{sx, sy, sz};

    fn qubit_charges() -> Vec<HermitianObservable> {
        vec![
            HermitianObservable::new("sz", Subsystem::First, sz()).unwrap(),
            HermitianObservable::new("sx", Subsystem::First, sx()).unwrap(),
        ]
    }

    #[test]
    fn solves_the_defining_relation() {
        let charges = qubit_charges();
        let lam = AffinityVector::new(vec![0.9, -0.4]).unwrap();
        let state = build_gge(&charges, &lam).unwrap();
        for q in [sz(), sx(), sy()] {
            let op = sld_from_state(&state, &q);
            assert!(sld_relation_residual(&state, &q, &op) < 1e-15);
        }
    }

    #[test]
    fn derivative_matches_central_difference() {
        let charges = qubit_charges();
        let lam = AffinityVector::new(vec![0.9, -0.4]).unwrap();
        let state = build_gge(&charges, &lam).unwrap();
        let h = 1e-5;
        let up = build_gge(&charges, &lam.shifted(1, h)).unwrap().density;
        let down = build_gge(&charges, &lam.shifted(1, -h)).unwrap().density;
        let fd = (up - down) / Complex64::new(2.0 * h, 0.0);
        assert!(max_abs(&(fd - gge_derivative(&state, &sx()))) < 1e-9);
    }

    #[test]
    fn series_converges_inside_radius() {
        let charges = qubit_charges();
        let lam = AffinityVector::new(vec![0.5, 0.3]).unwrap();
        let exact = sld(&charges, &lam, 0).unwrap();
        let series = sld_series(&charges, &lam, 0, 40).unwrap();
        assert!(max_abs(&(exact.matrix() - series.matrix())) < 1e-13);
    }

    #[test]
    fn series_refused_outside_radius() {
        let charges = qubit_charges();
        let lam = AffinityVector::new(vec![1.5, 1.5]).unwrap();
        let err = sld_series(&charges, &lam, 1, 10).unwrap_err();
        assert!(matches!(err, TransportError::SeriesOutsideConvergence { .. }));
        assert!(sld(&charges, &lam, 2).is_err());
    }
}
