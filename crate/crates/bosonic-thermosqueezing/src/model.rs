use gge_states::AffinityVector;
use hermitian_core::sparse::SparseCMat;
use hermitian_core::{unitary_exp, CMat};
use nalgebra_sparse::{CooMatrix, CsrMatrix};
use num_complex::Complex64;
use transport_engine::{ChargePair, CollisionSetup, SetupOptions};

use crate::error::{BosonicError, Result};
use crate::fock::{build_fock_in_frame, FockSpace};

/// Largest GGE weight outside the complete sectors that a computation may ignore.
pub const LEAKAGE_TOLERANCE: f64 = 1e-10;

/// Joint indices `n1·d + n2` with `n1 + n2 = total`, ordered by `n1`.
fn sector_states(d: usize, total: usize) -> Vec<(usize, usize)> {
    let lo = total.saturating_sub(d - 1);
    let hi = total.min(d - 1);
    (lo..=hi).map(|n1| (n1, total - n1)).collect()
}

/// `n1 + n2 ≤ d − 1`: the sectors that truncation leaves complete.
pub fn sector_mask(d: usize) -> Vec<bool> {
    let mut mask = vec![false; d * d];
    for n1 in 0..d {
        for n2 in 0..d - n1 {
            mask[n1 * d + n2] = true;
        }
    }
    mask
}

/// `exp(−gτ(a₁†a₂ − a₂†a₁))` built block by block in total excitation number.
///
/// The truncated generator conserves `n1 + n2`, so every block is exponentiated
/// on its own; the blocks are real orthogonal.
pub fn beam_splitter(gtau: f64, space: &FockSpace) -> Result<SparseCMat> {
    if !gtau.is_finite() {
        return Err(BosonicError::InvalidParameter { name: "gtau", value: gtau });
    }
    let d = space.dim();
    let n = d * d;
    let mut coo = CooMatrix::new(n, n);
    for total in 0..=2 * (d - 1) {
        let states = sector_states(d, total);
        let m = states.len();
        let mut herm = CMat::zeros(m, m);
        for (j, &(n1, n2)) in states.iter().enumerate() {
            // a₁†a₂ raises n1; in sector order that is the next state.
            if j + 1 < m {
                let amp = gtau * (((n1 + 1) * n2) as f64).sqrt();
                // K[j+1, j] = −amp, K[j, j+1] = +amp, stored as i·K.
                herm[(j + 1, j)] = Complex64::new(0.0, -amp);
                herm[(j, j + 1)] = Complex64::new(0.0, amp);
            }
        }
        let block = unitary_exp(&herm, 1.0)?;
        for (i, &(a1, a2)) in states.iter().enumerate() {
            for (j, &(b1, b2)) in states.iter().enumerate() {
                let v = block[(i, j)].re;
                if v != 0.0 {
                    coo.push(a1 * d + a2, b1 * d + b2, Complex64::new(v, 0.0));
                }
            }
        }
    }
    Ok(CsrMatrix::from(&coo))
}

/// Collision setup with charges `H`, `A` (and optionally `Q₃`), preservation
/// checked on the complete sectors.
pub fn bosonic_setup(space: &FockSpace, gtau: f64, include_q3: bool) -> Result<CollisionSetup> {
    let u = beam_splitter(gtau, space)?;
    let mut charges = vec![
        ChargePair::symmetric("H", space.h.clone()),
        ChargePair::symmetric("A", space.asym.clone()),
    ];
    if include_q3 {
        charges.push(ChargePair::symmetric("Q3", space.q3.clone()));
    }
    let d = space.dim();
    let options = SetupOptions {
        sector: Some(sector_mask(d)),
        ..SetupOptions::default()
    };
    Ok(CollisionSetup::new(d, d, charges, u, options)?)
}

/// Two identical truncated modes and their beam-splitter collision.
#[derive(Debug, Clone)]
pub struct BosonicModel {
    space: FockSpace,
    gtau: f64,
    include_q3: bool,
    setup: CollisionSetup,
}

impl BosonicModel {
    pub fn new(d: usize, omega: f64, gtau: f64, frame_r: f64, include_q3: bool) -> Result<Self> {
        let space = build_fock_in_frame(d, omega, frame_r)?;
        let setup = bosonic_setup(&space, gtau, include_q3)?;
        Ok(Self {
            space,
            gtau,
            include_q3,
            setup,
        })
    }

    /// Model whose number basis diagonalizes the squeezed thermal state at `r`.
    pub fn for_squeezing(d: usize, omega: f64, gtau: f64, r: f64) -> Result<Self> {
        Self::new(d, omega, gtau, r, false)
    }

    pub fn space(&self) -> &FockSpace {
        &self.space
    }

    pub fn setup(&self) -> &CollisionSetup {
        &self.setup
    }

    pub fn gtau(&self) -> f64 {
        self.gtau
    }

    pub fn includes_q3(&self) -> bool {
        self.include_q3
    }

    /// `(β, −βμ)`, padded with a zero affinity for `Q₃` when present.
    pub fn affinities(&self, beta: f64, mu: f64) -> Result<AffinityVector> {
        let mut v = vec![beta, -beta * mu];
        if self.include_q3 {
            v.push(0.0);
        }
        Ok(AffinityVector::new(v)?)
    }

    /// GGE weight of `π_λ ⊗ π_λ` outside `n1 + n2 ≤ d − 1`.
    pub fn leakage(&self, lambda: &AffinityVector) -> Result<f64> {
        let s = self.setup.state_first(lambda)?;
        let d = self.space.dim();
        let diag: Vec<f64> = (0..d).map(|n| s.density[(n, n)].re).collect();
        let mut inside = 0.0;
        for n1 in 0..d {
            for n2 in 0..d - n1 {
                inside += diag[n1] * diag[n2];
            }
        }
        Ok((1.0 - inside).max(0.0))
    }

    /// Fails with [`BosonicError::Leakage`] above `tolerance`.
    pub fn require_low_leakage(&self, lambda: &AffinityVector, tolerance: f64) -> Result<f64> {
        let leakage = self.leakage(lambda)?;
        if leakage > tolerance {
            return Err(BosonicError::Leakage { leakage, tolerance });
        }
        Ok(leakage)
    }
}
