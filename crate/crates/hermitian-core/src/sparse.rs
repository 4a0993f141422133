//! Compressed-row helpers for joint-space operators.
//!
//! Bipartite operators built from local factors are usually very sparse
//! (Kronecker products with identities, block-diagonal unitaries). These
//! routines keep such operators in CSR form and contract them against
//! product states without ever forming the dense joint matrix.

use nalgebra_sparse::CsrMatrix;
use num_complex::Complex64;

use crate::ops::Keep;
use crate::{CMat, LinalgError, Result};

pub type SparseCMat = CsrMatrix<Complex64>;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Converts a dense matrix, dropping exact zeros.
pub fn to_sparse(m: &CMat) -> SparseCMat {
    let (nr, nc) = m.shape();
    let mut offsets = Vec::with_capacity(nr + 1);
    let mut indices = Vec::new();
    let mut values = Vec::new();
    offsets.push(0);
    for i in 0..nr {
        for j in 0..nc {
            let v = m[(i, j)];
            if v != ZERO {
                indices.push(j);
                values.push(v);
            }
        }
        offsets.push(indices.len());
    }
    CsrMatrix::try_from_csr_data(nr, nc, offsets, indices, values)
        .expect("row-major traversal yields valid CSR data")
}

pub fn to_dense(s: &SparseCMat) -> CMat {
    let mut m = CMat::zeros(s.nrows(), s.ncols());
    for (i, j, v) in s.triplet_iter() {
        m[(i, j)] += *v;
    }
    m
}

pub fn identity(n: usize) -> SparseCMat {
    CsrMatrix::identity(n)
}

/// Sparse `a ⊗ b`, skipping zero entries of either factor.
pub fn kron(a: &CMat, b: &CMat) -> SparseCMat {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let a_rows: Vec<Vec<(usize, Complex64)>> = (0..ar)
        .map(|i| (0..ac).filter(|&j| a[(i, j)] != ZERO).map(|j| (j, a[(i, j)])).collect())
        .collect();
    let b_rows: Vec<Vec<(usize, Complex64)>> = (0..br)
        .map(|k| (0..bc).filter(|&l| b[(k, l)] != ZERO).map(|l| (l, b[(k, l)])).collect())
        .collect();
    let mut offsets = Vec::with_capacity(ar * br + 1);
    let mut indices = Vec::new();
    let mut values = Vec::new();
    offsets.push(0);
    for arow in &a_rows {
        for brow in &b_rows {
            for &(j, av) in arow {
                for &(l, bv) in brow {
                    indices.push(j * bc + l);
                    values.push(av * bv);
                }
            }
            offsets.push(indices.len());
        }
    }
    CsrMatrix::try_from_csr_data(ar * br, ac * bc, offsets, indices, values)
        .expect("ordered traversal yields valid CSR data")
}

/// Conjugate transpose.
pub fn adjoint(s: &SparseCMat) -> SparseCMat {
    let mut t = s.transpose();
    for v in t.values_mut() {
        *v = v.conj();
    }
    t
}

/// `w† s w`.
pub fn conjugate(s: &SparseCMat, w: &SparseCMat) -> SparseCMat {
    let sw = s * w;
    &adjoint(w) * &sw
}

pub fn max_abs(s: &SparseCMat) -> f64 {
    s.values().iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Largest modulus among entries whose row and column both lie in `mask`.
pub fn max_abs_restricted(s: &SparseCMat, mask: &[bool]) -> f64 {
    s.triplet_iter()
        .filter(|(i, j, _)| mask[*i] && mask[*j])
        .fold(0.0, |acc, (_, _, v)| acc.max(v.norm()))
}

pub fn trace(s: &SparseCMat) -> Complex64 {
    s.triplet_iter().filter(|(i, j, _)| i == j).map(|(_, _, v)| *v).sum()
}

/// `tr(s (a ⊗ b))` for a joint operator `s` on a `d1 * d2` space.
pub fn trace_with_product(s: &SparseCMat, a: &CMat, b: &CMat) -> Result<Complex64> {
    let (d1, d2) = (a.nrows(), b.nrows());
    check_joint(s, d1, d2)?;
    let mut acc = ZERO;
    for (r, col, v) in s.triplet_iter() {
        let (i, k) = (r / d2, r % d2);
        let (j, l) = (col / d2, col % d2);
        acc += *v * a[(j, i)] * b[(l, k)];
    }
    Ok(acc)
}

/// Partial trace of a sparse joint operator.
pub fn partial_trace(s: &SparseCMat, d1: usize, d2: usize, keep: Keep) -> Result<CMat> {
    check_joint(s, d1, d2)?;
    let mut out = match keep {
        Keep::First => CMat::zeros(d1, d1),
        Keep::Second => CMat::zeros(d2, d2),
    };
    for (r, col, v) in s.triplet_iter() {
        let (i, k) = (r / d2, r % d2);
        let (j, l) = (col / d2, col % d2);
        match keep {
            Keep::First if k == l => out[(i, j)] += *v,
            Keep::Second if i == j => out[(k, l)] += *v,
            _ => {}
        }
    }
    Ok(out)
}

/// `Tr₂[s (I ⊗ sigma)]`, the partner-weighted reduction onto subsystem 1.
pub fn reduce_with_partner(s: &SparseCMat, d1: usize, sigma: &CMat) -> Result<CMat> {
    let d2 = sigma.nrows();
    check_joint(s, d1, d2)?;
    let mut out = CMat::zeros(d1, d1);
    for (r, col, v) in s.triplet_iter() {
        let (i, k) = (r / d2, r % d2);
        let (j, m) = (col / d2, col % d2);
        out[(i, j)] += *v * sigma[(m, k)];
    }
    Ok(out)
}

fn check_joint(s: &SparseCMat, d1: usize, d2: usize) -> Result<()> {
    let n = d1 * d2;
    if s.nrows() != n || s.ncols() != n {
        return Err(LinalgError::DimensionMismatch {
            expected: n,
            found: s.nrows(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ops::{self, max_abs as dense_max_abs};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn random_sparse_ish(n: usize, rng: &mut StdRng) -> CMat {
        CMat::from_fn(n, n, |_, _| {
            if rng.random_bool(0.4) {
                Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
            } else {
                ZERO
            }
        })
    }

    #[test]
    fn round_trip() {
        let mut rng = StdRng::seed_from_u64(1);
        let m = random_sparse_ish(5, &mut rng);
        assert_eq!(to_dense(&to_sparse(&m)), m);
    }

    #[test]
    fn kron_matches_dense() {
        let mut rng = StdRng::seed_from_u64(2);
        let a = random_sparse_ish(3, &mut rng);
        let b = random_sparse_ish(4, &mut rng);
        let diff = to_dense(&kron(&a, &b)) - ops::kron(&a, &b);
        assert!(dense_max_abs(&diff) == 0.0);
    }

    #[test]
    fn adjoint_and_conjugation_match_dense() {
        let mut rng = StdRng::seed_from_u64(3);
        let a = random_sparse_ish(6, &mut rng);
        let w = random_sparse_ish(6, &mut rng);
        let s = conjugate(&to_sparse(&a), &to_sparse(&w));
        let dense = w.adjoint() * &a * &w;
        assert!(dense_max_abs(&(to_dense(&s) - dense)) < 1e-12);
        assert_eq!(to_dense(&adjoint(&to_sparse(&a))), a.adjoint());
    }

    #[test]
    fn contractions_match_dense() {
        let mut rng = StdRng::seed_from_u64(4);
        let (d1, d2) = (2, 3);
        let s = random_sparse_ish(d1 * d2, &mut rng);
        let a = random_sparse_ish(d1, &mut rng);
        let b = random_sparse_ish(d2, &mut rng);
        let sp = to_sparse(&s);
        let t = trace_with_product(&sp, &a, &b).unwrap();
        assert!((t - (&s * ops::kron(&a, &b)).trace()).norm() < 1e-12);
        for keep in [Keep::First, Keep::Second] {
            let lhs = partial_trace(&sp, d1, d2, keep).unwrap();
            let rhs = ops::partial_trace(&s, d1, d2, keep).unwrap();
            assert!(dense_max_abs(&(lhs - rhs)) < 1e-12);
        }
        let xi = reduce_with_partner(&sp, d1, &b).unwrap();
        let full = &s * ops::kron(&CMat::identity(d1, d1), &b);
        let expect = ops::partial_trace(&full, d1, d2, Keep::First).unwrap();
        assert!(dense_max_abs(&(xi - expect)) < 1e-12);
    }

    #[test]
    fn restricted_norm_ignores_masked_entries() {
        let mut m = CMat::zeros(3, 3);
        m[(0, 2)] = Complex64::new(5.0, 0.0);
        m[(1, 1)] = Complex64::new(1.0, 0.0);
        let s = to_sparse(&m);
        assert_eq!(max_abs_restricted(&s, &[true, true, false]), 1.0);
        assert_eq!(max_abs(&s), 5.0);
    }
}
