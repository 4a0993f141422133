use bosonic_thermosqueezing::{
    closed_form_onsager, engine_from_onsager, heat_squeezing_onsager, heat_squeezing_transform, symplectic_charge_check,
    thermo_from_onsager, SymplecticMatrix,
};
use collision_sim::fixed_point_check;
use hermitian_core::{unitary_exp, CMat};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use transport_engine::{
    entropy_informational, entropy_split, exact_currents, onsager_casimir_check, tanh_ratio_series, transform_onsager,
    OnsagerReport, TimeReversalSpec,
};

use super::{Context, Outcome};
use crate::config::{Method, ModelKind};
use crate::error::Result;
use crate::model::{build_instance, cross_discrepancy, numeric_onsager, qubit_demo_setup, Instance};
use crate::output::{format_float, Table};

/// Largest joint dimension for which the informational entropy is formed.
pub const INFORMATIONAL_MAX_DIM: usize = 1024;
/// Largest affinity offset of the linear-response probe.
pub const LINEAR_PROBE: f64 = 1e-4;
/// Random passive maps drawn for the symplectic check.
pub const PASSIVE_SAMPLES: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn pass(&self) -> bool {
        self.residual <= self.tolerance
    }
}

struct Suite {
    checks: Vec<Check>,
    errors: Vec<String>,
    override_tol: Option<f64>,
}

impl Suite {
    fn add(&mut self, name: impl Into<String>, residual: f64, tolerance: f64) {
        self.checks.push(Check {
            name: name.into(),
            residual,
            tolerance: self.override_tol.unwrap_or(tolerance),
        });
    }

    /// Records a failed check when the computation itself errors.
    fn guard(&mut self, name: &str, tolerance: f64, f: impl FnOnce() -> Result<f64>) {
        match f() {
            Ok(r) => self.add(name, r, tolerance),
            Err(e) => {
                self.errors.push(format!("{name}: {e}"));
                self.add(name, f64::INFINITY, tolerance);
            }
        }
    }
}

fn rel(diff: f64, scale: f64) -> f64 {
    if scale > 0.0 {
        diff / scale
    } else {
        diff
    }
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |a, b| a.max(b.abs()))
}

fn onsager_checks(s: &mut Suite, prefix: &str, reports: &[OnsagerReport], cross_tol: f64) {
    for r in reports {
        let n = r.norm_max();
        s.add(format!("{prefix}onsager_symmetry_{}", r.method.name()), rel(r.symmetry_residual, n), 1e-9);
        s.add(format!("{prefix}onsager_psd_{}", r.method.name()), rel((-r.min_eigenvalue).max(0.0), n), 1e-10);
    }
    if reports.len() > 1 {
        let ls: Vec<&DMatrix<f64>> = reports.iter().map(|r| &r.l).collect();
        s.add(format!("{prefix}cross_method"), cross_discrepancy(&ls), cross_tol);
    }
}

fn instance_checks(s: &mut Suite, prefix: &str, inst: &Instance, ctx: &Context) {
    let setup = &inst.setup;
    let tol = &ctx.config.tolerances;
    s.add(format!("{prefix}unitarity"), setup.unitarity_residual(), 1e-10);
    s.add(format!("{prefix}charge_preservation"), setup.preservation().max_relative(), setup.options().tolerance);
    s.guard(&format!("{prefix}gge_reconstruction"), 1e-10, || {
        let st = setup.state_first(&inst.lambda)?;
        let qs: Vec<&CMat> = setup.charges().iter().map(|p| &p.first).collect();
        Ok(st.reconstruction_residual(&qs)?)
    });
    s.guard(&format!("{prefix}equilibrium_fixed_point"), 1e-10, || Ok(fixed_point_check(setup, &inst.lambda)?));

    let reports = match numeric_onsager(inst, Method::All, tol.fd_step) {
        Ok(r) => r,
        Err(e) => {
            s.errors.push(format!("{prefix}onsager: {e}"));
            s.add(format!("{prefix}onsager"), f64::INFINITY, 0.0);
            return;
        }
    };
    onsager_checks(s, prefix, &reports, tol.cross_method);
    let l = reports[0].l.clone();

    let delta = inst.delta_lambda();
    s.guard(&format!("{prefix}entropy_split_closure"), 1e-9, || {
        let sp = entropy_split(setup, &inst.lambda, &delta)?;
        Ok(rel(sp.split_residual, sp.classical.abs()))
    });
    s.guard(&format!("{prefix}second_moment_bound"), 1e-12, || {
        let sp = entropy_split(setup, &inst.lambda, &delta)?;
        Ok(rel((sp.sigma - sp.half_second_moment).max(0.0), sp.half_second_moment))
    });
    s.guard(&format!("{prefix}current_conservation"), 1e-10, || {
        Ok(exact_currents(setup, &inst.lambda1, &inst.lambda)?.conservation_residual())
    });
    s.guard(&format!("{prefix}linear_response"), 1e-3, || {
        let scale = delta.iter().fold(0.0f64, |a, b| a.max(b.abs()));
        if scale == 0.0 {
            return Ok(0.0);
        }
        let small: Vec<f64> = delta.iter().map(|d| d * LINEAR_PROBE / scale).collect();
        let shifted = inst.lambda.values().iter().zip(&small).map(|(a, b)| a + b).collect();
        let j = exact_currents(setup, &gge_states::AffinityVector::new(shifted)?, &inst.lambda)?;
        let lin = &l * nalgebra::DVector::from_column_slice(&small);
        let diff = j.first.iter().zip(lin.iter()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        Ok(rel(diff, lin.amax()))
    });
    if setup.joint_dim() <= INFORMATIONAL_MAX_DIM {
        s.guard(&format!("{prefix}entropy_flux_vs_informational"), 1e-9, || {
            let j = exact_currents(setup, &inst.lambda1, &inst.lambda)?;
            let flux: f64 = j.first.iter().zip(&delta).map(|(a, b)| a * b).sum();
            let info = entropy_informational(setup, &inst.lambda1, &inst.lambda)?;
            Ok((flux - info.sigma).abs())
        });
    }

    if let Some(b) = &inst.bosonic {
        let p = &b.point;
        s.add(format!("{prefix}truncation_leakage"), b.leakage, tol.leakage);
        let closed = closed_form_onsager(p, ctx.config.bosonic.closed_form.variant());
        let block = l.view((0, 0), (2, 2)).into_owned();
        s.add(format!("{prefix}closed_form"), cross_discrepancy(&[&block, &closed]), 1e-6);
        s.guard(&format!("{prefix}heat_squeezing_closed_form"), 1e-6, || {
            let lp = transform_onsager(&block, &heat_squeezing_transform(p.mu))?;
            let closed = heat_squeezing_onsager(p, ctx.config.bosonic.closed_form.variant());
            Ok(cross_discrepancy(&[&lp, &closed]))
        });
        s.guard(&format!("{prefix}peltier_seebeck"), 1e-12, || {
            let c = thermo_from_onsager(&heat_squeezing_onsager(p, ctx.config.bosonic.closed_form.variant()), p.temperature())?;
            Ok(rel((c.pi - c.temperature * c.s).abs(), c.pi.abs()))
        });
        s.guard(&format!("{prefix}stopping_bias_power"), 1e-12, || {
            let lp = heat_squeezing_onsager(p, ctx.config.bosonic.closed_form.variant());
            let e = engine_from_onsager(&lp, p.beta, ctx.config.bosonic.delta_beta)?;
            let scale = e.coefficients.l_aq.abs() * e.delta_beta * e.delta_mu_stop.abs();
            Ok(rel(e.at(e.delta_mu_stop).power.abs(), scale))
        });
    }
}

fn model_free_checks(s: &mut Suite, ctx: &Context) {
    for alpha in [0.1f64, 0.5, 1.0] {
        let exact = alpha.tanh() / alpha - 1.0;
        s.add(format!("series_identity_alpha_{alpha}"), (tanh_ratio_series(2.0 * alpha, 40) - exact).abs(), 1e-8);
    }

    let rot = (0..4)
        .map(|i| symplectic_charge_check(&SymplecticMatrix::rotation(0.4 * i as f64 + 0.1)))
        .map(|c| c.residuals.iter().copied().fold(0.0, f64::max))
        .fold(0.0, f64::max);
    s.add("symplectic_rotation_preserves_all", rot, 1e-10);

    let mut rng = StdRng::seed_from_u64(ctx.seed);
    let mut k1: f64 = 0.0;
    let mut keeps_squeezing = 0usize;
    for _ in 0..PASSIVE_SAMPLES {
        let h: [f64; 4] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let t = rng.random_range(0.1..2.0);
        let herm = CMat::from_row_slice(
            2,
            2,
            &[
                Complex64::new(h[0], 0.0),
                Complex64::new(h[1], h[2]),
                Complex64::new(h[1], -h[2]),
                Complex64::new(h[3], 0.0),
            ],
        );
        let Ok(u) = unitary_exp(&herm, t) else { continue };
        let Ok(v) = SymplecticMatrix::passive(&u.map(|z| z.re), &u.map(|z| z.im)) else { continue };
        if max_abs(&u.map(|z| z.im)) < 1e-6 {
            continue;
        }
        let c = symplectic_charge_check(&v);
        k1 = k1.max(c.residuals[0]);
        if c.preserved[1] && c.preserved[2] {
            keeps_squeezing += 1;
        }
    }
    s.add("symplectic_passive_preserves_energy", k1, 1e-10);
    s.add("symplectic_mixing_breaks_squeezing", keeps_squeezing as f64, 0.0);

    let q = &ctx.config.qubit_demo;
    s.guard("casimir_qubit_demo", 1e-9, || {
        let setup = qubit_demo_setup(q.theta)?;
        let lambda = gge_states::AffinityVector::new(q.lambda.clone())?;
        let rep = onsager_casimir_check(&setup, &lambda, &TimeReversalSpec::from_conjugation(2, 2))?;
        Ok(rel(rep.residual, max_abs(&rep.l)))
    });
}

/// Runs every invariant; the report lists each check with its residual.
pub fn run(ctx: &Context) -> Result<(Outcome, Vec<Check>)> {
    let mut s = Suite {
        checks: Vec::new(),
        errors: Vec::new(),
        override_tol: ctx.config.tolerances.verify,
    };
    model_free_checks(&mut s, ctx);
    if ctx.config.model != ModelKind::QubitDemo {
        let mut demo = ctx.clone();
        demo.config.model = ModelKind::QubitDemo;
        if let Ok(inst) = build_instance(&demo.config, None) {
            instance_checks(&mut s, "qubit_demo.", &inst, &demo);
        }
    }
    let prefix = match ctx.config.model {
        ModelKind::Bosonic => "bosonic.",
        ModelKind::QubitDemo => "qubit_demo.",
        ModelKind::CustomMatrices => "custom.",
    };
    match build_instance(&ctx.config, ctx.fock_dim) {
        Ok(inst) => instance_checks(&mut s, prefix, &inst, ctx),
        Err(crate::error::CliError::Leakage { leakage, tolerance, point }) => {
            s.errors.push(format!("{prefix}truncation_leakage at {point}"));
            s.add(format!("{prefix}truncation_leakage"), leakage, tolerance);
        }
        Err(e) => return Err(e),
    }

    let mut table = Table::new(
        "residuals are relative to the natural scale of each check except counts and absolute entropies; pass means residual <= tolerance",
        &["name", "residual", "tolerance", "pass"],
    );
    for c in &s.checks {
        table.push(vec![c.name.clone(), format_float(c.residual), format_float(c.tolerance), c.pass().to_string()]);
    }
    let failed = s.checks.iter().filter(|c| !c.pass()).count();
    let mut summary = vec![format!("verify: {} of {} checks passed", s.checks.len() - failed, s.checks.len())];
    summary.extend(s.checks.iter().filter(|c| !c.pass()).map(|c| {
        format!("FAILED {}: residual {:.3e} > tolerance {:.1e}", c.name, c.residual, c.tolerance)
    }));
    summary.extend(s.errors);
    Ok((Outcome { table, summary }, s.checks))
}
