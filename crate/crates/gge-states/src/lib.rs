//! Generalized Gibbs ensembles `π = exp(−Σ λ_k Q_k) / Z`.
//!
//! Units follow `ħ = k_B = 1`: charges carry energy units of `ħω` and
//! affinities carry inverse energy.

use hermitian_core::{eig_hermitian, hermiticity_residual, max_abs, symmetrize, CMat, EigenDecomposition, LinalgError};
use nalgebra::DVector;
use num_complex::Complex64;
use thiserror::Error;

/// Allowed `‖M − M†‖_max` relative to `max(‖M‖_max, 1)`.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Largest imaginary part tolerated in an expectation value.
pub const IMAGINARY_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GgeError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("charge {label} has dimension {found}, expected {expected}")]
    DimensionMismatch {
        label: String,
        expected: usize,
        found: usize,
    },
    #[error("{charges} charges but {affinities} affinities")]
    LengthMismatch { charges: usize, affinities: usize },
    #[error("affinity {index} is not finite")]
    NonFinite { index: usize },
    #[error("observable {label} is not Hermitian (residual {residual:e})")]
    NotHermitian { label: String, residual: f64 },
    #[error("expectation value has imaginary part {0:e}")]
    ImaginaryExpectation(f64),
    #[error("empty charge set")]
    NoCharges,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, GgeError>;

/// Where an observable acts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
    Joint,
}

/// A labelled Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianObservable {
    label: String,
    subsystem: Subsystem,
    matrix: CMat,
}

impl HermitianObservable {
    /// Validates Hermiticity, then stores the symmetrized matrix.
    pub fn new(label: impl Into<String>, subsystem: Subsystem, matrix: CMat) -> Result<Self> {
        let label = label.into();
        if matrix.nrows() != matrix.ncols() {
            return Err(LinalgError::NotSquare {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
            }
            .into());
        }
        let residual = hermiticity_residual(&matrix);
        if residual > HERMITIAN_TOL * max_abs(&matrix).max(1.0) {
            return Err(GgeError::NotHermitian { label, residual });
        }
        Ok(Self {
            label,
            subsystem,
            matrix: symmetrize(&matrix),
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn subsystem(&self) -> Subsystem {
        self.subsystem
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }
}

/// Affinities `λ_k`, one per charge.
#[derive(Debug, Clone, PartialEq)]
pub struct AffinityVector {
    values: Vec<f64>,
}

impl AffinityVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(GgeError::NonFinite { index });
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `self + h e_index`.
    pub fn shifted(&self, index: usize, h: f64) -> Self {
        let mut values = self.values.clone();
        values[index] += h;
        Self { values }
    }

    /// Componentwise `self − other`.
    pub fn minus(&self, other: &Self) -> Vec<f64> {
        self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect()
    }
}

/// A generalized Gibbs state with its spectrum cached.
///
/// `eig` holds the density's eigenvalues in ascending order;
/// `ln_populations` holds their logarithms in the same order, computed from
/// the generator so that weights far below the float range keep exact logs.
#[derive(Debug, Clone)]
pub struct GgeState {
    pub density: CMat,
    pub eig: EigenDecomposition,
    pub ln_populations: Vec<f64>,
    pub affinities: AffinityVector,
    pub log_partition: f64,
}

/// Builds `exp(−Σ λ_k Q_k) / Z` with a spectral shift against overflow.
pub fn build_gge(charges: &[HermitianObservable], lambda: &AffinityVector) -> Result<GgeState> {
    let first = charges.first().ok_or(GgeError::NoCharges)?;
    let n = first.dim();
    for q in charges {
        if q.dim() != n {
            return Err(GgeError::DimensionMismatch {
                label: q.label.clone(),
                expected: n,
                found: q.dim(),
            });
        }
    }
    let mats: Vec<&CMat> = charges.iter().map(|q| &q.matrix).collect();
    GgeState::from_matrices(&mats, lambda)
}

impl GgeState {
    /// Same as [`build_gge`] for raw Hermitian matrices of equal size.
    pub fn from_matrices(charges: &[&CMat], lambda: &AffinityVector) -> Result<Self> {
        if charges.len() != lambda.len() {
            return Err(GgeError::LengthMismatch {
                charges: charges.len(),
                affinities: lambda.len(),
            });
        }
        let first = charges.first().ok_or(GgeError::NoCharges)?;
        let n = first.nrows();
        let mut generator = CMat::zeros(n, n);
        for (k, (q, &l)) in charges.iter().zip(lambda.values()).enumerate() {
            if q.nrows() != n || q.ncols() != n {
                return Err(GgeError::DimensionMismatch {
                    label: format!("Q{}", k + 1),
                    expected: n,
                    found: q.nrows(),
                });
            }
            generator += *q * Complex64::new(l, 0.0);
        }
        let g = eig_hermitian(&generator)?;
        // ascending generator eigenvalues give descending populations
        let e0 = g.eigenvalues[0];
        let shifted: Vec<f64> = g.eigenvalues.iter().map(|e| -(e - e0)).collect();
        let ln_zs = log_sum_exp(&shifted);
        let log_partition = -e0 + ln_zs;
        let order: Vec<usize> = (0..n).rev().collect();
        let ln_populations: Vec<f64> = order.iter().map(|&i| shifted[i] - ln_zs).collect();
        let mut vectors = CMat::zeros(n, n);
        for (dst, &src) in order.iter().enumerate() {
            vectors.set_column(dst, &g.eigenvectors.column(src));
        }
        let eig = EigenDecomposition {
            eigenvalues: DVector::from_iterator(n, ln_populations.iter().map(|l| l.exp())),
            eigenvectors: vectors,
        };
        let density = symmetrize(&eig.reconstruct());
        Ok(Self {
            density,
            eig,
            ln_populations,
            affinities: lambda.clone(),
            log_partition,
        })
    }

    pub fn dim(&self) -> usize {
        self.density.nrows()
    }

    /// Eigenvalues of the density, ascending.
    pub fn populations(&self) -> &[f64] {
        self.eig.eigenvalues.as_slice()
    }

    /// `tr(ρ O)` for a Hermitian matrix.
    pub fn expectation_of(&self, o: &CMat) -> Result<f64> {
        if o.nrows() != self.dim() || o.ncols() != self.dim() {
            return Err(GgeError::DimensionMismatch {
                label: "observable".into(),
                expected: self.dim(),
                found: o.nrows(),
            });
        }
        let v = hermitian_core::trace_product(&self.density, o);
        if v.im.abs() > IMAGINARY_TOL * v.re.abs().max(1.0) {
            return Err(GgeError::ImaginaryExpectation(v.im));
        }
        Ok(v.re)
    }

    /// `exp(−Σ λ_k Q_k) / Z − ρ`, largest entry modulus.
    pub fn reconstruction_residual(&self, charges: &[&CMat]) -> Result<f64> {
        let n = self.dim();
        let mut generator = CMat::zeros(n, n);
        for (q, &l) in charges.iter().zip(self.affinities.values()) {
            generator += *q * Complex64::new(l, 0.0);
        }
        let ln_z = self.log_partition;
        let direct = eig_hermitian(&generator)?.map(|e| (-e - ln_z).exp())?;
        Ok(max_abs(&(direct - &self.density)))
    }

    /// von Neumann entropy `−Σ p ln p`.
    pub fn entropy(&self) -> f64 {
        self.populations()
            .iter()
            .zip(&self.ln_populations)
            .map(|(p, l)| -p * l)
            .sum()
    }
}

/// `tr(ρ O)`.
pub fn expectation(state: &GgeState, o: &HermitianObservable) -> Result<f64> {
    state.expectation_of(&o.matrix)
}

fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    m + xs.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// Affinities and derived parameters of a squeezed thermal state.
#[derive(Debug, Clone, PartialEq)]
pub struct SqueezedThermal {
    pub beta: f64,
    pub r: f64,
    pub omega: f64,
    /// Squeezing potential `tanh(2r)`.
    pub mu: f64,
    /// `β ω sqrt(1 − μ²)`.
    pub alpha: f64,
    /// `1 / (e^α − 1)`.
    pub nbar: f64,
    /// `(β, −β μ)` for the charges `(H, A)`.
    pub affinities: AffinityVector,
}

pub fn squeezed_thermal_affinities(beta: f64, r: f64, omega: f64) -> Result<SqueezedThermal> {
    if !r.is_finite() {
        return Err(GgeError::InvalidParameter(format!("r = {r} must be finite")));
    }
    let mut s = squeezed_thermal_from_mu(beta, (2.0 * r).tanh(), omega)?;
    s.r = r;
    Ok(s)
}

/// Same parametrization starting from `μ`, with `r = atanh(μ) / 2`.
pub fn squeezed_thermal_from_mu(beta: f64, mu: f64, omega: f64) -> Result<SqueezedThermal> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(GgeError::InvalidParameter(format!("beta = {beta} must be positive")));
    }
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(GgeError::InvalidParameter(format!("omega = {omega} must be positive")));
    }
    if !(mu.abs() < 1.0) {
        return Err(GgeError::InvalidParameter(format!("|mu| = {} must be below 1", mu.abs())));
    }
    let alpha = beta * omega * (1.0 - mu * mu).sqrt();
    Ok(SqueezedThermal {
        beta,
        r: 0.5 * mu.atanh(),
        omega,
        mu,
        alpha,
        nbar: 1.0 / alpha.exp_m1(),
        affinities: AffinityVector::new(vec![beta, -beta * mu])?,
    })
}
