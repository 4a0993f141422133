//! Sequential collisions of a system unit with a stream of fresh reservoir
//! units. Each collision starts from the same product `π₁⊗π₂`, so every step
//! transports the same charges and produces the same entropy.

use std::io::Write;

use gge_states::AffinityVector;
use hermitian_core::sparse;
use hermitian_core::CMat;
use thiserror::Error;
use transport_engine::{collide, exact_currents, CollisionSetup, CurrentVector, TransportError};

/// Density-matrix entries at or below this modulus are dropped before the
/// joint state is formed.
const DENSITY_DROP: f64 = 1e-16;

#[derive(Debug, Error)]
pub enum SimError {
    #[error(transparent)]
    Transport(#[from] TransportError),
    #[error("collision count must be at least 1")]
    NoCollisions,
    #[error("csv output failed: {0}")]
    Csv(#[from] csv::Error),
    #[error("output failed: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, SimError>;

/// How each collision is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Evaluation {
    /// Forms `U(π₁⊗π₂)U†` and takes partial traces.
    Schrodinger,
    /// Evolves the charges instead of the state; never forms the joint state.
    #[default]
    Heisenberg,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CollisionRecord {
    /// 1-based collision index.
    pub step: usize,
    pub currents: CurrentVector,
    /// `δλ·J` for this collision.
    pub sigma: f64,
    /// Charge gained by the system unit stream after this step.
    pub cumulative_charges: Vec<f64>,
    pub cumulative_sigma: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub labels: Vec<String>,
    pub delta_lambda: Vec<f64>,
    pub records: Vec<CollisionRecord>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn last(&self) -> Option<&CollisionRecord> {
        self.records.last()
    }

    /// Smallest per-collision entropy production.
    pub fn min_sigma(&self) -> f64 {
        self.records.iter().map(|r| r.sigma).fold(f64::INFINITY, f64::min)
    }

    /// Largest `|J_k⁽¹⁾ + J_k⁽²⁾|` over all steps.
    pub fn conservation_residual(&self) -> f64 {
        self.records
            .iter()
            .map(|r| r.currents.conservation_residual())
            .fold(0.0, f64::max)
    }

    /// Largest relative deviation of the cumulative charges and entropy from
    /// `n` times the first collision.
    pub fn linearity_residual(&self) -> f64 {
        let Some(first) = self.records.first() else { return 0.0 };
        let mut worst: f64 = 0.0;
        for r in &self.records {
            let n = r.step as f64;
            let pairs = r
                .cumulative_charges
                .iter()
                .zip(&first.currents.first)
                .chain(std::iter::once((&r.cumulative_sigma, &first.sigma)));
            for (cum, one) in pairs {
                let expect = n * one;
                let scale = expect.abs().max(f64::MIN_POSITIVE);
                let dev = (cum - expect).abs();
                worst = worst.max(if expect == 0.0 { dev } else { dev / scale });
            }
        }
        worst
    }

    pub fn header(&self) -> Vec<String> {
        let mut h = vec!["step".to_string()];
        h.extend(self.labels.iter().map(|l| format!("J_{l}")));
        h.push("sigma".into());
        h.extend(self.labels.iter().map(|l| format!("cum_Q_{l}")));
        h.push("cum_sigma".into());
        h
    }

    /// CSV with a `#` unit line, then `step, J_…, sigma, cum_Q_…, cum_sigma`.
    pub fn write_csv<W: Write>(&self, mut out: W, units: &str) -> Result<()> {
        writeln!(out, "# {units}")?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(self.header())?;
        for r in &self.records {
            let mut row = vec![r.step.to_string()];
            row.extend(r.currents.first.iter().map(|v| format_float(*v)));
            row.push(format_float(r.sigma));
            row.extend(r.cumulative_charges.iter().map(|v| format_float(*v)));
            row.push(format_float(r.cumulative_sigma));
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Seventeen significant digits in scientific notation.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn one_collision(
    setup: &CollisionSetup,
    lambda1: &AffinityVector,
    lambda2: &AffinityVector,
    how: Evaluation,
) -> Result<CurrentVector> {
    Ok(match how {
        Evaluation::Schrodinger => collide(setup, lambda1, lambda2)?.currents,
        Evaluation::Heisenberg => exact_currents(setup, lambda1, lambda2)?,
    })
}

/// Runs `n` collisions, each from a fresh `π_{λ1}⊗π_{λ2}`.
pub fn run_collisions(
    setup: &CollisionSetup,
    lambda1: &AffinityVector,
    lambda2: &AffinityVector,
    n: usize,
    how: Evaluation,
) -> Result<Trajectory> {
    if n == 0 {
        return Err(SimError::NoCollisions);
    }
    let delta_lambda = lambda1.minus(lambda2);
    let k = setup.num_charges();
    let mut cumulative = vec![0.0; k];
    let mut cumulative_sigma = 0.0;
    let mut records = Vec::with_capacity(n);
    for step in 1..=n {
        let currents = one_collision(setup, lambda1, lambda2, how)?;
        let sigma: f64 = delta_lambda.iter().zip(&currents.first).map(|(a, b)| a * b).sum();
        for (c, j) in cumulative.iter_mut().zip(&currents.first) {
            *c += j;
        }
        cumulative_sigma += sigma;
        records.push(CollisionRecord {
            step,
            currents,
            sigma,
            cumulative_charges: cumulative.clone(),
            cumulative_sigma,
        });
    }
    Ok(Trajectory {
        labels: setup.charges().iter().map(|p| p.label.clone()).collect(),
        delta_lambda,
        records,
    })
}

fn drop_tiny(m: &CMat) -> CMat {
    m.map(|z| if z.norm() <= DENSITY_DROP { Default::default() } else { z })
}

/// `‖U(π₁⊗π₂)U† − π₁⊗π₂‖_max`, restricted to the setup's sector when it has one.
pub fn fixed_point_residual(setup: &CollisionSetup, lambda1: &AffinityVector, lambda2: &AffinityVector) -> Result<f64> {
    let s1 = setup.state_first(lambda1)?;
    let s2 = setup.state_second(lambda2)?;
    let rho0 = sparse::kron(&drop_tiny(&s1.density), &drop_tiny(&s2.density));
    let u = setup.unitary();
    let rho = &(u * &rho0) * &sparse::adjoint(u);
    let diff = &rho - &rho0;
    Ok(match &setup.options().sector {
        Some(mask) => sparse::max_abs_restricted(&diff, mask),
        None => sparse::max_abs(&diff),
    })
}

/// Fixed-point residual of the global equilibrium `π_λ⊗π_λ`.
pub fn fixed_point_check(setup: &CollisionSetup, lambda: &AffinityVector) -> Result<f64> {
    fixed_point_residual(setup, lambda, lambda)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use transport_engine::ChargePair;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn qubit_setup(theta: f64) -> CollisionSetup {
        let sz = CMat::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)]);
        let sx = CMat::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]);
        let mut swap = CMat::zeros(4, 4);
        for (i, j) in [(0, 0), (1, 2), (2, 1), (3, 3)] {
            swap[(i, j)] = c(1., 0.);
        }
        let u = CMat::identity(4, 4) * c(theta.cos(), 0.) + swap * c(0., -theta.sin());
        CollisionSetup::from_dense(2, 2, vec![ChargePair::symmetric("z", sz), ChargePair::symmetric("x", sx)], &u).unwrap()
    }

    fn lam(v: &[f64]) -> AffinityVector {
        AffinityVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn equal_affinities_give_a_flat_trajectory() {
        let t = run_collisions(&qubit_setup(0.4), &lam(&[0.3, 0.2]), &lam(&[0.3, 0.2]), 5, Evaluation::Schrodinger).unwrap();
        for r in &t.records {
            assert!(r.currents.first.iter().all(|j| j.abs() < 1e-16));
            assert!(r.cumulative_sigma.abs() < 1e-16);
        }
    }

    #[test]
    fn single_step_matches_collide() {
        let setup = qubit_setup(0.4);
        let (l1, l2) = (lam(&[0.9, -0.1]), lam(&[0.3, 0.2]));
        let t = run_collisions(&setup, &l1, &l2, 1, Evaluation::Schrodinger).unwrap();
        let out = collide(&setup, &l1, &l2).unwrap();
        assert_eq!(t.records[0].currents, out.currents);
        assert_eq!(t.records[0].sigma, out.sigma);
    }

    #[test]
    fn accumulation_is_linear_and_evaluations_agree() {
        let setup = qubit_setup(0.7);
        let (l1, l2) = (lam(&[0.9, -0.1]), lam(&[0.3, 0.2]));
        let a = run_collisions(&setup, &l1, &l2, 50, Evaluation::Schrodinger).unwrap();
        let b = run_collisions(&setup, &l1, &l2, 50, Evaluation::Heisenberg).unwrap();
        assert!(a.linearity_residual() < 1e-12);
        assert!(a.conservation_residual() < 1e-14);
        assert!(a.min_sigma() > 0.0);
        let (ra, rb) = (a.last().unwrap(), b.last().unwrap());
        for (x, y) in ra.cumulative_charges.iter().zip(&rb.cumulative_charges) {
            assert!((x - y).abs() < 1e-13);
        }
    }

    #[test]
    fn csv_layout() {
        let t = run_collisions(&qubit_setup(0.7), &lam(&[0.5, 0.0]), &lam(&[0.0, 0.0]), 2, Evaluation::Heisenberg).unwrap();
        let mut buf = Vec::new();
        t.write_csv(&mut buf, "charges in units of hbar*omega").unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# charges in units of hbar*omega");
        assert_eq!(lines[1], "step,J_z,J_x,sigma,cum_Q_z,cum_Q_x,cum_sigma");
        assert_eq!(lines.len(), 4);
        assert!(lines[2].starts_with("1,"));
        assert_eq!(format_float(0.1), "1.0000000000000001e-1");
    }

    #[test]
    fn zero_collisions_rejected() {
        assert!(matches!(
            run_collisions(&qubit_setup(0.1), &lam(&[0.0, 0.0]), &lam(&[0.0, 0.0]), 0, Evaluation::Heisenberg),
            Err(SimError::NoCollisions)
        ));
    }

    #[test]
    fn swap_fixed_point() {
        let setup = qubit_setup(std::f64::consts::FRAC_PI_2);
        assert!(fixed_point_check(&setup, &lam(&[0.4, 0.8])).unwrap() < 1e-15);
        assert!(fixed_point_residual(&setup, &lam(&[0.4, 0.8]), &lam(&[0.1, 0.8])).unwrap() > 1e-3);
    }
}
