//! Elementary operator algebra on dense matrices.

use num_complex::Complex64;

use crate::{require_square, CMat, LinalgError, Result};

/// Which factor of a bipartite space survives a partial trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Keep {
    First,
    Second,
}

/// `(m + m†) / 2`.
pub fn symmetrize(m: &CMat) -> CMat {
    (m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Largest entry modulus.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// `‖m − m†‖_max`.
pub fn hermiticity_residual(m: &CMat) -> f64 {
    max_abs(&(m - m.adjoint()))
}

/// `‖u†u − I‖_max`.
pub fn unitarity_residual(u: &CMat) -> f64 {
    let n = u.ncols();
    max_abs(&(u.adjoint() * u - CMat::identity(n, n)))
}

pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

pub fn anticommutator(a: &CMat, b: &CMat) -> CMat {
    a * b + b * a
}

/// `tr(a b)` without forming the product.
pub fn trace_product(a: &CMat, b: &CMat) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..a.nrows() {
        for k in 0..a.ncols() {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

/// Kronecker product with subsystem 1 as the slow index.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

/// Traces out one factor of a `d1 * d2` dimensional operator.
pub fn partial_trace(m: &CMat, d1: usize, d2: usize, keep: Keep) -> Result<CMat> {
    let n = require_square(m)?;
    if n != d1 * d2 {
        return Err(LinalgError::DimensionMismatch {
            expected: d1 * d2,
            found: n,
        });
    }
    let out = match keep {
        Keep::First => CMat::from_fn(d1, d1, |i, j| {
            (0..d2).map(|k| m[(i * d2 + k, j * d2 + k)]).sum()
        }),
        Keep::Second => CMat::from_fn(d2, d2, |k, l| {
            (0..d1).map(|i| m[(i * d2 + k, i * d2 + l)]).sum()
        }),
    };
    Ok(out)
}

/// `(a ⊗ b)† m (a ⊗ b)` without forming the Kronecker product.
pub fn kron_conjugate(m: &CMat, a: &CMat, b: &CMat) -> Result<CMat> {
    let d1 = require_square(a)?;
    let d2 = require_square(b)?;
    let n = require_square(m)?;
    if n != d1 * d2 {
        return Err(LinalgError::DimensionMismatch {
            expected: d1 * d2,
            found: n,
        });
    }
    let ad = a.adjoint();
    let bd = b.adjoint();
    let mut out = m.clone();
    for j in 0..d1 {
        let block = out.columns(j * d2, d2) * b;
        out.columns_mut(j * d2, d2).copy_from(&block);
    }
    for i in 0..d1 {
        let block = &bd * out.rows(i * d2, d2);
        out.rows_mut(i * d2, d2).copy_from(&block);
    }
    for l in 0..d2 {
        let gathered = CMat::from_fn(n, d1, |r, j| out[(r, j * d2 + l)]);
        let mixed = gathered * a;
        for j in 0..d1 {
            out.set_column(j * d2 + l, &mixed.column(j));
        }
    }
    for k in 0..d2 {
        let gathered = CMat::from_fn(d1, n, |i, col| out[(i * d2 + k, col)]);
        let mixed = &ad * gathered;
        for i in 0..d1 {
            out.set_row(i * d2 + k, &mixed.row(i));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c;
    use nalgebra::DVector;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn random(n: usize, rng: &mut StdRng) -> CMat {
        CMat::from_fn(n, n, |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
    }

    fn random_state(n: usize, rng: &mut StdRng) -> CMat {
        let a = random(n, rng);
        let m = &a * a.adjoint();
        let t = m.trace();
        m / t
    }

    #[test]
    fn identity_kron_identity() {
        let k = kron(&CMat::identity(2, 2), &CMat::identity(2, 2));
        assert_eq!(k, CMat::identity(4, 4));
    }

    #[test]
    fn diagonal_kron_ordering() {
        let a = CMat::from_diagonal(&DVector::from_vec(vec![c(1.0), c(2.0)]));
        let b = CMat::from_diagonal(&DVector::from_vec(vec![c(3.0), c(4.0)]));
        let k = kron(&a, &b);
        let d: Vec<f64> = (0..4).map(|i| k[(i, i)].re).collect();
        assert_eq!(d, vec![3.0, 4.0, 6.0, 8.0]);
    }

    #[test]
    fn kron_trace_factorizes() {
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..10 {
            let a = random(3, &mut rng);
            let b = random(3, &mut rng);
            let lhs = kron(&a, &b).trace();
            assert!((lhs - a.trace() * b.trace()).norm() < 1e-12);
        }
    }

    #[test]
    fn partial_trace_of_identity() {
        let r = partial_trace(&CMat::identity(4, 4), 2, 2, Keep::First).unwrap();
        assert_eq!(r, CMat::identity(2, 2) * c(2.0));
    }

    #[test]
    fn partial_trace_dimension_mismatch() {
        assert!(matches!(
            partial_trace(&CMat::identity(5, 5), 2, 2, Keep::First),
            Err(LinalgError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn partial_trace_recovers_product_factors() {
        let mut rng = StdRng::seed_from_u64(9);
        let a = random(2, &mut rng);
        let b = random(3, &mut rng);
        let ab = kron(&a, &b);
        let first = partial_trace(&ab, 2, 3, Keep::First).unwrap();
        let second = partial_trace(&ab, 2, 3, Keep::Second).unwrap();
        assert!(max_abs(&(first - &a * b.trace())) < 1e-12);
        assert!(max_abs(&(second - &b * a.trace())) < 1e-12);
    }

    #[test]
    fn reduced_state_after_unitary_has_unit_trace() {
        let mut rng = StdRng::seed_from_u64(17);
        for _ in 0..5 {
            let rho = random_state(2, &mut rng);
            let sigma = random_state(2, &mut rng);
            let h = symmetrize(&random(4, &mut rng));
            let u = crate::unitary_exp(&h, 1.0).unwrap();
            let out = &u * kron(&rho, &sigma) * u.adjoint();
            let r1 = partial_trace(&out, 2, 2, Keep::First).unwrap();
            assert!((r1.trace() - c(1.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn kron_conjugate_matches_explicit_product() {
        let mut rng = StdRng::seed_from_u64(29);
        let a = random(3, &mut rng);
        let b = random(4, &mut rng);
        let m = random(12, &mut rng);
        let w = kron(&a, &b);
        let expect = w.adjoint() * &m * &w;
        assert!(max_abs(&(kron_conjugate(&m, &a, &b).unwrap() - expect)) < 1e-12);
    }

    #[test]
    fn trace_product_matches_dense_product() {
        let mut rng = StdRng::seed_from_u64(23);
        let a = random(4, &mut rng);
        let b = random(4, &mut rng);
        assert!((trace_product(&a, &b) - (&a * &b).trace()).norm() < 1e-12);
    }
}
