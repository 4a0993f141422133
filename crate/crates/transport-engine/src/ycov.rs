use gge_states::GgeState;
use hermitian_core::{log_mean_ln, CMat, LinalgError, EIGENVALUE_FLOOR};
use num_complex::Complex64;

use crate::error::Result;

fn check(state: &GgeState, ms: &[&CMat]) -> Result<()> {
    for m in ms {
        if m.nrows() != state.dim() || m.ncols() != state.dim() {
            return Err(LinalgError::DimensionMismatch {
                expected: state.dim(),
                found: m.nrows(),
            }
            .into());
        }
    }
    Ok(())
}

fn clamped_powers(state: &GgeState, y: f64) -> Vec<f64> {
    state
        .populations()
        .iter()
        .map(|p| p.max(EIGENVALUE_FLOOR).powf(y))
        .collect()
}

fn diag_mean(state: &GgeState, x: &CMat) -> Complex64 {
    state
        .populations()
        .iter()
        .enumerate()
        .map(|(i, p)| x[(i, i)] * *p)
        .sum()
}

/// `cov_y(A, B) = tr(A π^y B π^(1−y)) − tr(Aπ) tr(Bπ)`.
///
/// Complex in general; `cov_y(A, B)* = cov_(1−y)(A, B)` for Hermitian inputs.
pub fn y_covariance(a: &CMat, b: &CMat, state: &GgeState, y: f64) -> Result<Complex64> {
    check(state, &[a, b])?;
    let xa = state.eig.to_eigenbasis(a);
    let xb = state.eig.to_eigenbasis(b);
    let py = clamped_powers(state, y);
    let pc = clamped_powers(state, 1.0 - y);
    let n = state.dim();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += xa[(i, j)] * xb[(j, i)] * (py[j] * pc[i]);
        }
    }
    Ok(acc - diag_mean(state, &xa) * diag_mean(state, &xb))
}

/// `∫₀¹ cov_y(A, B) dy` through logarithmic means in the eigenbasis of π.
pub fn y_covariance_integral(a: &CMat, b: &CMat, state: &GgeState) -> Result<f64> {
    check(state, &[a, b])?;
    let xa = state.eig.to_eigenbasis(a);
    let xb = state.eig.to_eigenbasis(b);
    let lp = &state.ln_populations;
    let n = state.dim();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += xa[(i, j)] * xb[(j, i)] * log_mean_ln(lp[i], lp[j]);
        }
    }
    Ok((acc - diag_mean(state, &xa) * diag_mean(state, &xb)).re)
}

/// Wigner-Yanase-Dyson skew information `−½ tr([π^y, A][π^(1−y), A])`.
pub fn skew_information(state: &GgeState, a: &CMat, y: f64) -> Result<f64> {
    check(state, &[a])?;
    let x = state.eig.to_eigenbasis(a);
    let py = clamped_powers(state, y);
    let pc = clamped_powers(state, 1.0 - y);
    let n = state.dim();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            acc += x[(i, j)].norm_sqr() * (py[i] - py[j]) * (pc[j] - pc[i]);
        }
    }
    Ok(-0.5 * acc)
}

/// `∫₀¹ I_y(π, A) dy = ½ Σ_ij |A_ij|² (p_i + p_j − 2 m(p_i, p_j))`.
pub fn skew_information_integral(state: &GgeState, a: &CMat) -> Result<f64> {
    check(state, &[a])?;
    let x = state.eig.to_eigenbasis(a);
    let p = state.populations();
    let lp = &state.ln_populations;
    let n = state.dim();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            acc += x[(i, j)].norm_sqr() * (p[i] + p[j] - 2.0 * log_mean_ln(lp[i], lp[j]));
        }
    }
    Ok(0.5 * acc)
}
