use gge_states::GgeState;
use hermitian_core::sparse::{self, SparseCMat};
use hermitian_core::{kron_conjugate, log_mean_ln, CMat};
use num_complex::Complex64;

use crate::error::Result;

/// Joint sizes above which dense eigenvectors are applied blockwise.
const DENSE_SWITCH: usize = 256;

/// Eigenvector entries below this modulus are treated as zero, so that
/// nearly diagonal states keep a sparse change of basis.
const EIGVEC_DROP: f64 = 1e-12;

fn drop_tiny(v: &CMat) -> CMat {
    v.map(|z| if z.norm() < EIGVEC_DROP { Complex64::new(0.0, 0.0) } else { z })
}

/// Eigenbasis of a product state `π₁⊗π₂`.
///
/// Joint eigenvector `(i, k)` is `v_i ⊗ w_k` with population `p_i q_k`; its
/// index follows the global Kronecker convention.
#[derive(Debug, Clone)]
pub struct JointFrame {
    d1: usize,
    d2: usize,
    v1: CMat,
    v2: CMat,
    ln_pop: Vec<f64>,
    pop: Vec<f64>,
}

impl JointFrame {
    pub fn new(s1: &GgeState, s2: &GgeState) -> Self {
        let (d1, d2) = (s1.dim(), s2.dim());
        let mut ln_pop = Vec::with_capacity(d1 * d2);
        for &a in &s1.ln_populations {
            for &b in &s2.ln_populations {
                ln_pop.push(a + b);
            }
        }
        let pop = ln_pop.iter().map(|l| l.exp()).collect();
        Self {
            d1,
            d2,
            v1: drop_tiny(&s1.eig.eigenvectors),
            v2: drop_tiny(&s2.eig.eigenvectors),
            ln_pop,
            pop,
        }
    }

    pub fn dim(&self) -> usize {
        self.d1 * self.d2
    }

    pub fn populations(&self) -> &[f64] {
        &self.pop
    }

    pub fn ln_populations(&self) -> &[f64] {
        &self.ln_pop
    }

    /// `m(P_a, P_b)`, the logarithmic mean of two joint populations.
    #[inline]
    pub fn log_mean(&self, a: usize, b: usize) -> f64 {
        log_mean_ln(self.ln_pop[a], self.ln_pop[b])
    }

    /// `W† m W` with `W = V₁⊗V₂`.
    pub fn to_eigenbasis(&self, m: &SparseCMat) -> Result<SparseCMat> {
        let nnz_w = count_nonzero(&self.v1) * count_nonzero(&self.v2);
        let n = self.dim();
        if nnz_w <= 4 * n || n <= DENSE_SWITCH {
            let w = sparse::kron(&self.v1, &self.v2);
            Ok(sparse::conjugate(m, &w))
        } else {
            let dense = kron_conjugate(&sparse::to_dense(m), &self.v1, &self.v2)?;
            Ok(sparse::to_sparse(&dense))
        }
    }

    /// `Σ_a P_a x_aa` for an operator already in the eigenbasis.
    pub fn mean(&self, x: &SparseCMat) -> f64 {
        x.triplet_iter()
            .filter(|(i, j, _)| i == j)
            .map(|(i, _, v)| self.pop[i] * v.re)
            .sum()
    }

    /// `Σ_ab x_ab conj(y_ab) w(a, b)` for eigenbasis operators with sorted
    /// CSR rows. With `y` Hermitian, `conj(y_ab) = y_ba`.
    pub fn weighted_overlap(&self, x: &SparseCMat, y: &SparseCMat, w: impl Fn(usize, usize) -> f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (a, (rx, ry)) in x.row_iter().zip(y.row_iter()).enumerate() {
            let (cx, vx) = (rx.col_indices(), rx.values());
            let (cy, vy) = (ry.col_indices(), ry.values());
            let (mut i, mut j) = (0, 0);
            while i < cx.len() && j < cy.len() {
                match cx[i].cmp(&cy[j]) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => {
                        acc += vx[i] * vy[j].conj() * w(a, cx[i]);
                        i += 1;
                        j += 1;
                    }
                }
            }
        }
        acc
    }

    /// `Σ_ab |x_ab|² w(a, b)`.
    pub fn weighted_norm(&self, x: &SparseCMat, w: impl Fn(usize, usize) -> f64) -> f64 {
        x.triplet_iter().map(|(a, b, v)| v.norm_sqr() * w(a, b)).sum()
    }
}

fn count_nonzero(m: &CMat) -> usize {
    m.iter().filter(|z| **z != Complex64::new(0.0, 0.0)).count()
}
