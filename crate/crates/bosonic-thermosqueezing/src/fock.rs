use hermitian_core::{anticommutator, CMat};
use num_complex::Complex64;

use crate::error::{BosonicError, Result};

/// Single-mode operators truncated to `d` number states, in units of `ħω`.
///
/// With `frame_r ≠ 0` the number basis is that of the squeezed mode
/// `x_b = e^r x`, `p_b = e^(−r) p`. The operators still represent the
/// physical `x`, `p`, `H`, `A`; only the truncation changes.
#[derive(Debug, Clone)]
pub struct FockSpace {
    d: usize,
    omega: f64,
    frame_r: f64,
    pub a: CMat,
    pub adag: CMat,
    pub x: CMat,
    pub p: CMat,
    /// `ω(p² + x²)/2`.
    pub h: CMat,
    /// `ω(p² − x²)/2`.
    pub asym: CMat,
    /// `ω{x, p}/2`.
    pub q3: CMat,
}

fn ladder(d: usize) -> CMat {
    let mut a = CMat::zeros(d, d);
    for n in 1..d {
        a[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    a
}

/// Standard number-basis operators.
pub fn build_fock(d: usize, omega: f64) -> Result<FockSpace> {
    build_fock_in_frame(d, omega, 0.0)
}

/// Operators in the number basis of a mode squeezed by `frame_r`.
///
/// `H = cosh(2r) H_b + sinh(2r) A_b` and `A = sinh(2r) H_b + cosh(2r) A_b`,
/// where `H_b = ω(a†a + ½)` and `A_b = −ω(a² + a†²)/2`.
pub fn build_fock_in_frame(d: usize, omega: f64, frame_r: f64) -> Result<FockSpace> {
    if d < 2 {
        return Err(BosonicError::InvalidDimension(d));
    }
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(BosonicError::InvalidParameter { name: "omega", value: omega });
    }
    if !frame_r.is_finite() {
        return Err(BosonicError::InvalidParameter { name: "frame_r", value: frame_r });
    }
    let a = ladder(d);
    let adag = a.adjoint();
    let w = Complex64::new(omega, 0.0);
    let hb = CMat::from_diagonal(&nalgebra::DVector::from_fn(d, |n, _| Complex64::new(omega * (n as f64 + 0.5), 0.0)));
    let ab = (&a * &a + &adag * &adag) * (-w * 0.5);
    let (c, s) = ((2.0 * frame_r).cosh(), (2.0 * frame_r).sinh());
    let h = &hb * Complex64::new(c, 0.0) + &ab * Complex64::new(s, 0.0);
    let asym = &hb * Complex64::new(s, 0.0) + &ab * Complex64::new(c, 0.0);
    let root = std::f64::consts::FRAC_1_SQRT_2;
    let xb = (&a + &adag) * Complex64::new(root, 0.0);
    let pb = (&a - &adag) * Complex64::new(0.0, -root);
    let q3 = anticommutator(&xb, &pb) * (w * 0.5);
    Ok(FockSpace {
        d,
        omega,
        frame_r,
        x: xb * Complex64::new((-frame_r).exp(), 0.0),
        p: pb * Complex64::new(frame_r.exp(), 0.0),
        a,
        adag,
        h,
        asym,
        q3,
    })
}

impl FockSpace {
    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn frame_r(&self) -> f64 {
        self.frame_r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use gge_states::{squeezed_thermal_affinities, GgeState};
    use hermitian_core::{commutator, hermiticity_residual, max_abs};

    #[test]
    fn spectrum_and_structure() {
        let f = build_fock(8, 1.5).unwrap();
        for n in 0..8 {
            assert!((f.h[(n, n)].re - 1.5 * (n as f64 + 0.5)).abs() < 1e-15);
            assert_eq!(f.asym[(n, n)], Complex64::new(0.0, 0.0));
        }
        assert!(f.asym[(0, 2)].norm() > 0.0);
        assert_eq!(f.asym[(0, 1)], Complex64::new(0.0, 0.0));
        for m in [&f.h, &f.asym, &f.q3, &f.x, &f.p] {
            assert!(hermiticity_residual(m) < 1e-15);
        }
    }

    #[test]
    fn canonical_commutator_below_top_level() {
        for r in [0.0, 0.7] {
            let f = build_fock_in_frame(10, 1.0, r).unwrap();
            let c = commutator(&f.x, &f.p);
            for i in 0..9 {
                for j in 0..9 {
                    let expect = if i == j { Complex64::new(0.0, 1.0) } else { Complex64::new(0.0, 0.0) };
                    assert!((c[(i, j)] - expect).norm() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn frame_operators_match_quadratures() {
        let f = build_fock_in_frame(12, 0.8, 0.4).unwrap();
        let h = (&f.p * &f.p + &f.x * &f.x) * Complex64::new(0.4, 0.0);
        let a = (&f.p * &f.p - &f.x * &f.x) * Complex64::new(0.4, 0.0);
        // Products of truncated quadratures differ only in the last row and column.
        let inner = |m: CMat| m.view((0, 0), (11, 11)).into_owned();
        assert!(max_abs(&(inner(h) - inner(f.h.clone()))) < 1e-12);
        assert!(max_abs(&(inner(a) - inner(f.asym.clone()))) < 1e-12);
    }

    #[test]
    fn thermal_energy_matches_geometric_series() {
        let f = build_fock(40, 1.0).unwrap();
        let st = squeezed_thermal_affinities(1.0, 0.0, 1.0).unwrap();
        let state = GgeState::from_matrices(&[&f.h, &f.asym], &st.affinities).unwrap();
        let e = state.expectation_of(&f.h).unwrap();
        assert!((e - (st.nbar + 0.5)).abs() < 1e-10);
    }

    #[test]
    fn rejects_small_dimension() {
        assert!(matches!(build_fock(1, 1.0), Err(BosonicError::InvalidDimension(1))));
        assert!(build_fock(4, -1.0).is_err());
    }
}
