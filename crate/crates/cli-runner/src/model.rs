//! Builds collision setups and affinities from a run configuration.

use bosonic_thermosqueezing::{BosonicModel, SqueezingPoint};
use gge_states::AffinityVector;
use hermitian_core::CMat;
use nalgebra::DMatrix;
use num_complex::Complex64;
use transport_engine::{
    onsager_finite_difference, onsager_sld, onsager_ycov, ChargePair, CollisionSetup, FdScheme, OnsagerReport,
};

use crate::config::{BosonicParams, ComplexMatrix, CustomModel, Method, ModelKind, RunConfig};
use crate::error::{CliError, Result};

/// A collision setup with a reference state and a pair of reservoir states.
#[derive(Debug, Clone)]
pub struct Instance {
    pub setup: CollisionSetup,
    /// Affinities of the global equilibrium `π_λ⊗π_λ`.
    pub lambda: AffinityVector,
    /// Reservoir 1 for currents; reservoir 2 sits at `lambda`.
    pub lambda1: AffinityVector,
    pub bosonic: Option<BosonicInstance>,
}

#[derive(Debug, Clone)]
pub struct BosonicInstance {
    pub point: SqueezingPoint,
    pub leakage: f64,
}

impl Instance {
    pub fn delta_lambda(&self) -> Vec<f64> {
        self.lambda1.minus(&self.lambda)
    }

    pub fn labels(&self) -> Vec<String> {
        self.setup.charges().iter().map(|p| p.label.clone()).collect()
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `cos θ I − i sin θ SWAP` with charges `σz` and `σx` on each qubit.
pub fn qubit_demo_setup(theta: f64) -> Result<CollisionSetup> {
    let sz = CMat::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)]);
    let sx = CMat::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]);
    let mut swap = CMat::zeros(4, 4);
    for (i, j) in [(0, 0), (1, 2), (2, 1), (3, 3)] {
        swap[(i, j)] = c(1., 0.);
    }
    let u = CMat::identity(4, 4) * c(theta.cos(), 0.) + swap * c(0., -theta.sin());
    let charges = vec![ChargePair::symmetric("sz", sz), ChargePair::symmetric("sx", sx)];
    Ok(CollisionSetup::from_dense(2, 2, charges, &u)?)
}

fn dense(m: &ComplexMatrix, n: usize, what: &str) -> Result<CMat> {
    let shape_ok = |rows: &Vec<Vec<f64>>| rows.len() == n && rows.iter().all(|r| r.len() == n);
    if !shape_ok(&m.re) || m.im.as_ref().is_some_and(|im| !shape_ok(im)) {
        return Err(CliError::Config(format!("{what} must be {n}x{n}")));
    }
    Ok(CMat::from_fn(n, n, |i, j| {
        c(m.re[i][j], m.im.as_ref().map_or(0.0, |im| im[i][j]))
    }))
}

fn custom_setup(m: &CustomModel) -> Result<CollisionSetup> {
    if m.charges.is_empty() {
        return Err(CliError::Config("custom.charges must not be empty".into()));
    }
    let mut charges = Vec::with_capacity(m.charges.len());
    for q in &m.charges {
        let first = dense(&q.first, m.d1, &format!("charge {} (first)", q.label))?;
        let second = match &q.second {
            Some(s) => dense(s, m.d2, &format!("charge {} (second)", q.label))?,
            None if m.d1 == m.d2 => first.clone(),
            None => return Err(CliError::Config(format!("charge {} needs a second matrix", q.label))),
        };
        charges.push(ChargePair::new(q.label.clone(), first, second));
    }
    let u = dense(&m.unitary, m.d1 * m.d2, "custom.unitary")?;
    CollisionSetup::from_dense(m.d1, m.d2, charges, &u).map_err(|e| CliError::Config(e.to_string()))
}

fn affinities(v: &[f64], k: usize, what: &str) -> Result<AffinityVector> {
    if v.len() != k {
        return Err(CliError::Config(format!("{what} needs {k} entries, found {}", v.len())));
    }
    AffinityVector::new(v.to_vec()).map_err(|e| CliError::Config(e.to_string()))
}

fn with_offset(lambda: &AffinityVector, delta: &[f64]) -> Result<AffinityVector> {
    let v = lambda.values().iter().zip(delta).map(|(a, b)| a + b).collect();
    Ok(AffinityVector::new(v)?)
}

/// Bosonic model at `(β, r)` in the frame that diagonalizes the squeezed state.
pub fn bosonic_instance(b: &BosonicParams, beta: f64, r: f64, fock_dim: usize, leakage_tol: f64) -> Result<Instance> {
    let point = SqueezingPoint::from_r(beta, r, b.omega, b.gtau)?;
    let model = BosonicModel::new(fock_dim, b.omega, b.gtau, r, b.include_q3)?;
    let lambda = model.affinities(beta, point.mu)?;
    let mu1 = point.mu + b.delta_mu;
    if !(mu1.abs() < 1.0) {
        return Err(CliError::Config(format!("mu + delta_mu = {mu1} leaves (-1, 1)")));
    }
    let lambda1 = model.affinities(beta + b.delta_beta, mu1)?;
    let where_ = format!("beta={beta}, r={r}, fock_dim={fock_dim}");
    let mut leakage: f64 = 0.0;
    for l in [&lambda, &lambda1] {
        let v = model.leakage(l)?;
        if v > leakage_tol {
            return Err(CliError::Leakage {
                leakage: v,
                tolerance: leakage_tol,
                point: where_,
            });
        }
        leakage = leakage.max(v);
    }
    Ok(Instance {
        setup: model.setup().clone(),
        lambda,
        lambda1,
        bosonic: Some(BosonicInstance { point, leakage }),
    })
}

/// The instance described by `cfg`, with an optional Fock-dimension override.
pub fn build_instance(cfg: &RunConfig, fock_dim: Option<usize>) -> Result<Instance> {
    match cfg.model {
        ModelKind::Bosonic => {
            let b = &cfg.bosonic;
            let d = fock_dim.unwrap_or(b.fock_dim);
            bosonic_instance(b, b.beta, b.r(), d, cfg.tolerances.leakage)
        }
        ModelKind::QubitDemo => {
            let q = &cfg.qubit_demo;
            let setup = qubit_demo_setup(q.theta)?;
            let lambda = affinities(&q.lambda, 2, "qubit_demo.lambda")?;
            let lambda1 = with_offset(&lambda, &q.delta_lambda)?;
            Ok(Instance {
                setup,
                lambda,
                lambda1,
                bosonic: None,
            })
        }
        ModelKind::CustomMatrices => {
            let m = cfg.custom.as_ref().ok_or_else(|| CliError::Config("missing custom section".into()))?;
            let setup = custom_setup(m)?;
            let k = setup.num_charges();
            let lambda = affinities(&m.lambda, k, "custom.lambda")?;
            let delta = m.delta_lambda.clone().unwrap_or_else(|| vec![1e-3; k]);
            if delta.len() != k {
                return Err(CliError::Config(format!("custom.delta_lambda needs {k} entries")));
            }
            let lambda1 = with_offset(&lambda, &delta)?;
            Ok(Instance {
                setup,
                lambda,
                lambda1,
                bosonic: None,
            })
        }
    }
}

/// Numeric Onsager matrices for `method`; `All` expands to every numeric route.
pub fn numeric_onsager(inst: &Instance, method: Method, fd_step: f64) -> Result<Vec<OnsagerReport>> {
    let one = |m: Method| -> Result<Option<OnsagerReport>> {
        Ok(match m {
            Method::Ycov => Some(onsager_ycov(&inst.setup, &inst.lambda)?),
            Method::Sld => Some(onsager_sld(&inst.setup, &inst.lambda)?),
            Method::Fd => Some(onsager_finite_difference(&inst.setup, &inst.lambda, fd_step, FdScheme::Richardson)?),
            Method::All | Method::Closed => None,
        })
    };
    let list = match method {
        Method::All => vec![Method::Ycov, Method::Sld, Method::Fd],
        Method::Closed => vec![],
        m => vec![m],
    };
    let mut out = Vec::new();
    for m in list {
        out.extend(one(m)?);
    }
    Ok(out)
}

/// `max |A − B| / max(‖A‖_max, ‖B‖_max)` over all pairs.
pub fn cross_discrepancy(ls: &[&DMatrix<f64>]) -> f64 {
    let norm = |m: &DMatrix<f64>| m.iter().fold(0.0f64, |a, b| a.max(b.abs()));
    let mut worst: f64 = 0.0;
    for (i, a) in ls.iter().enumerate() {
        for b in &ls[i + 1..] {
            let scale = norm(a).max(norm(b));
            let diff = norm(&(*a - *b));
            worst = worst.max(if scale > 0.0 { diff / scale } else { diff });
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qubit_demo_is_valid() {
        let s = qubit_demo_setup(0.4).unwrap();
        assert!(s.is_valid());
        assert_eq!(s.num_charges(), 2);
    }

    #[test]
    fn custom_shape_checked() {
        let cfg = RunConfig::parse(
            r#"{"schema_version": 1, "model": "custom-matrices", "custom": {
                "d1": 2, "d2": 2,
                "charges": [{"label": "z", "first": {"re": [[1, 0], [0, -1]]}}],
                "unitary": {"re": [[1, 0], [0, 1]]},
                "lambda": [0.5]}}"#,
        )
        .unwrap();
        assert!(matches!(build_instance(&cfg, None), Err(CliError::Config(_))));
    }

    #[test]
    fn leakage_reported_with_point() {
        let cfg = RunConfig::parse(r#"{"schema_version": 1, "bosonic": {"beta": 0.1, "fock_dim": 10}}"#).unwrap();
        let err = build_instance(&cfg, None).unwrap_err();
        assert_eq!(err.exit_code(), crate::error::EXIT_LEAKAGE);
    }

    #[test]
    fn discrepancy_is_relative() {
        let a = DMatrix::from_row_slice(1, 2, &[2.0, 0.0]);
        let b = DMatrix::from_row_slice(1, 2, &[2.0, 1e-3]);
        assert!((cross_discrepancy(&[&a, &b]) - 5e-4).abs() < 1e-15);
        assert_eq!(cross_discrepancy(&[&a]), 0.0);
    }
}
