//! Closed-form Onsager coefficients for squeezed thermal reservoirs coupled by
//! a beam splitter, with affinities `(β, −βμ)` for the charges `(H, A)`.

use nalgebra::DMatrix;

use crate::error::{BosonicError, Result};

/// Thermal second moment of `A_b` as it is sometimes quoted, `n̄² + n̄/2 + ½`,
/// kept to reproduce the printed coefficients.
fn asym_moment_printed(nbar: f64) -> f64 {
    nbar * nbar + 0.5 * nbar + 0.5
}

/// `⟨A_b²⟩_th / ω² = n̄² + n̄ + ½`.
fn asym_moment(nbar: f64) -> f64 {
    nbar * nbar + nbar + 0.5
}

/// Which thermal moment of the squeezing charge enters the coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentVariant {
    /// `⟨A²⟩_th = ω²(n̄² + n̄ + ½)`, the value that matches exact numerics.
    Exact,
    /// `ω²(n̄² + n̄/2 + ½)`.
    Printed,
}

/// Parameters shared by all closed forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezingPoint {
    pub beta: f64,
    pub mu: f64,
    pub omega: f64,
    pub gtau: f64,
}

impl SqueezingPoint {
    pub fn new(beta: f64, mu: f64, omega: f64, gtau: f64) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(BosonicError::InvalidParameter { name: "beta", value: beta });
        }
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(BosonicError::InvalidParameter { name: "omega", value: omega });
        }
        if !gtau.is_finite() {
            return Err(BosonicError::InvalidParameter { name: "gtau", value: gtau });
        }
        if !(mu.abs() < 1.0) {
            return Err(BosonicError::MuOutOfRange(mu.abs()));
        }
        Ok(Self { beta, mu, omega, gtau })
    }

    /// From the squeezing parameter, `μ = tanh(2r)`.
    pub fn from_r(beta: f64, r: f64, omega: f64, gtau: f64) -> Result<Self> {
        if !r.is_finite() {
            return Err(BosonicError::InvalidParameter { name: "r", value: r });
        }
        Self::new(beta, (2.0 * r).tanh(), omega, gtau)
    }

    /// `1 − μ²`, exact for large `r` when built from `r`.
    pub fn one_minus_mu2(&self) -> f64 {
        (1.0 - self.mu) * (1.0 + self.mu)
    }

    /// `α = βω√(1 − μ²)`.
    pub fn alpha(&self) -> f64 {
        self.beta * self.omega * self.one_minus_mu2().sqrt()
    }

    /// `n̄ = 1/(e^α − 1)`.
    pub fn nbar(&self) -> f64 {
        1.0 / self.alpha().exp_m1()
    }

    /// `r = atanh(μ)/2`.
    pub fn r(&self) -> f64 {
        0.5 * self.mu.atanh()
    }

    pub fn temperature(&self) -> f64 {
        1.0 / self.beta
    }

    fn prefactor(&self) -> f64 {
        self.gtau.sin().powi(2) * self.omega * self.omega
    }

    fn moments(&self, variant: MomentVariant) -> (f64, f64) {
        let n = self.nbar();
        let a = self.alpha();
        let t = a.tanh() / a;
        let m = match variant {
            MomentVariant::Exact => asym_moment(n),
            MomentVariant::Printed => asym_moment_printed(n),
        };
        (n * n + n, t * m)
    }
}

/// `L` for the charges `(H, A)`.
pub fn closed_form_onsager(p: &SqueezingPoint, variant: MomentVariant) -> DMatrix<f64> {
    let (n1, n2) = p.moments(variant);
    let mu = p.mu;
    let c = p.prefactor() / p.one_minus_mu2();
    let l12 = c * mu * (n1 + n2);
    DMatrix::from_row_slice(2, 2, &[c * (n1 + mu * mu * n2), l12, l12, c * (mu * mu * n1 + n2)])
}

/// `L′` for heat and squeezing currents `J_Q = J_H − μJ_A`, `J_A`.
pub fn heat_squeezing_onsager(p: &SqueezingPoint, variant: MomentVariant) -> DMatrix<f64> {
    let (n1, n2) = p.moments(variant);
    let mu = p.mu;
    let k = p.prefactor();
    let l_qa = k * mu * n1;
    let l_aa = k * (mu * mu * n1 + n2) / p.one_minus_mu2();
    DMatrix::from_row_slice(2, 2, &[k * p.one_minus_mu2() * n1, l_qa, l_qa, l_aa])
}

/// `[[1, −μ], [0, 1]]`, mapping `(J_H, J_A)` to `(J_Q, J_A)`.
pub fn heat_squeezing_transform(mu: f64) -> DMatrix<f64> {
    DMatrix::from_row_slice(2, 2, &[1.0, -mu, 0.0, 1.0])
}

/// Entropy reduction `(α − tanh α) / (2α/(3 cosh α − sinh α − 1) + tanh α)`.
pub fn closed_form_r(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(BosonicError::InvalidParameter { name: "alpha", value: alpha });
    }
    let t = alpha.tanh();
    // α − tanh α loses all digits for small α; use its series.
    let num = if alpha < 1e-3 {
        alpha.powi(3) / 3.0 - 2.0 * alpha.powi(5) / 15.0
    } else {
        alpha - t
    };
    let den = 3.0 * alpha.cosh() - alpha.sinh() - 1.0;
    Ok(num / (2.0 * alpha / den + t))
}

/// `⟨D²⟩ − ⟨D⟩²` over `π⊗π` for `D = Σ δλ_k (U†Q_kU − Q_k)`, `Q = (H, A)`.
pub fn variance_d(p: &SqueezingPoint, delta: [f64; 2], variant: MomentVariant) -> f64 {
    let n = p.nbar();
    let n1 = n * n + n;
    let n2 = match variant {
        MomentVariant::Exact => asym_moment(n),
        MomentVariant::Printed => asym_moment_printed(n),
    };
    let (c, s) = (1.0 / p.one_minus_mu2().sqrt(), p.mu / p.one_minus_mu2().sqrt());
    let cross = match variant {
        MomentVariant::Exact => c * s,
        MomentVariant::Printed => c * c * s * s,
    };
    let [a, b] = delta;
    2.0 * p.prefactor()
        * (a * a * (c * c * n1 + s * s * n2) + 2.0 * a * b * cross * (n1 + n2) + b * b * (s * s * n1 + c * c * n2))
}

/// Single-mode moments of a squeezed thermal state, in units of `ħω`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezedMoments {
    pub h: f64,
    pub a: f64,
    pub h2: f64,
    pub a2: f64,
    /// `⟨HA⟩ = ⟨AH⟩`.
    pub ha: f64,
}

/// Moments from the thermal ones at `α`, rotated by `(cosh 2r, sinh 2r)`.
pub fn squeezed_moments(p: &SqueezingPoint) -> SqueezedMoments {
    let n = p.nbar();
    let w2 = p.omega * p.omega;
    let h_th = p.omega * (n + 0.5);
    let h2_th = w2 * (2.0 * n * n + 2.0 * n + 0.25);
    let a2_th = w2 * asym_moment(n);
    let (c, s) = (1.0 / p.one_minus_mu2().sqrt(), p.mu / p.one_minus_mu2().sqrt());
    SqueezedMoments {
        h: c * h_th,
        a: s * h_th,
        h2: c * c * h2_th + s * s * a2_th,
        a2: c * c * a2_th + s * s * h2_th,
        ha: c * s * (h2_th + a2_th),
    }
}
