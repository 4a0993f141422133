use bosonic_thermosqueezing::{closed_form_onsager, closed_form_r, variance_d};
use nalgebra::DMatrix;
use transport_engine::{entropy_split, exact_currents};

use super::{Context, Outcome};
use crate::config::Method;
use crate::error::{CliError, Result};
use crate::model::{build_instance, cross_discrepancy, numeric_onsager};
use crate::output::LongTable;

fn push_matrix(t: &mut LongTable, method: &str, labels: &[String], l: &DMatrix<f64>) {
    for (i, a) in labels.iter().enumerate().take(l.nrows()) {
        for (j, b) in labels.iter().enumerate().take(l.ncols()) {
            t.push(method, format!("L[{a},{b}]"), l[(i, j)]);
        }
    }
}

fn quad(l: &DMatrix<f64>, d: &[f64]) -> f64 {
    let v = nalgebra::DVector::from_column_slice(&d[..l.nrows()]);
    (v.transpose() * l * &v)[(0, 0)]
}

/// Onsager matrices by each requested method, with diagnostics.
pub fn run(ctx: &Context) -> Result<(Outcome, LongTable)> {
    let cfg = &ctx.config;
    let method = ctx.method_or(Method::All);
    let inst = build_instance(cfg, ctx.fock_dim)?;
    if method == Method::Closed && inst.bosonic.is_none() {
        return Err(CliError::Config("method closed exists only for the bosonic model".into()));
    }
    let labels = inst.labels();
    let delta = inst.delta_lambda();
    let mut t = LongTable::default();
    let mut summary = Vec::new();

    let reports = numeric_onsager(&inst, method, cfg.tolerances.fd_step)?;
    for r in &reports {
        let name = r.method.name();
        push_matrix(&mut t, name, &labels, &r.l);
        t.push(name, "symmetry_residual", r.symmetry_residual);
        t.push(name, "min_eigenvalue", r.min_eigenvalue);
        t.push(name, "norm_max", r.norm_max());
        t.push(name, "sigma_quadratic", r.quadratic_form(&delta));
        summary.push(format!(
            "{name}: ||L||_max = {:.6e}, symmetry residual = {:.3e}, min eigenvalue = {:.6e}",
            r.norm_max(),
            r.symmetry_residual,
            r.min_eigenvalue
        ));
    }

    let mut mats: Vec<&DMatrix<f64>> = reports.iter().map(|r| &r.l).collect();
    let closed = match (&inst.bosonic, method) {
        (Some(b), Method::All | Method::Closed) => {
            let p = &b.point;
            let variant = cfg.bosonic.closed_form.variant();
            let l = closed_form_onsager(p, variant);
            push_matrix(&mut t, "closed", &labels, &l);
            let sigma = quad(&l, &delta);
            let classical = 0.5 * variance_d(p, [delta[0], delta[1]], variant);
            t.push("closed", "sigma_quadratic", sigma);
            t.push("closed", "sigma_classical", classical);
            t.push("closed", "sigma_quantum", classical - sigma);
            t.push("closed", "R", (classical - sigma) / sigma);
            let r_alpha = closed_form_r(p.alpha())?;
            t.push("closed", "R_alpha", r_alpha);
            t.push("closed", "alpha", p.alpha());
            t.push("closed", "leakage", b.leakage);
            summary.push(format!("closed form: alpha = {:.6e}, R(alpha) = {r_alpha:.6e}, leakage = {:.3e}", p.alpha(), b.leakage));
            Some(l)
        }
        _ => None,
    };

    if mats.len() > 1 {
        let d = cross_discrepancy(&mats);
        t.push("all", "cross_method_discrepancy", d);
        let flag = if d <= cfg.tolerances.cross_method { "within" } else { "ABOVE" };
        summary.push(format!(
            "cross-method max discrepancy = {d:.3e} ({flag} tolerance {:.1e})",
            cfg.tolerances.cross_method
        ));
    }
    if let Some(l) = &closed {
        let blocks: Vec<DMatrix<f64>> = mats.iter().map(|m| m.view((0, 0), (2, 2)).into_owned()).collect();
        let worst = blocks.iter().map(|b| cross_discrepancy(&[b, l])).fold(0.0, f64::max);
        if !blocks.is_empty() {
            t.push("all", "closed_form_discrepancy", worst);
            summary.push(format!("numeric vs closed form max discrepancy = {worst:.3e}"));
        }
    }
    mats.clear();

    if method != Method::Closed {
        let split = entropy_split(&inst.setup, &inst.lambda, &delta)?;
        t.push("entropy", "sigma", split.sigma);
        t.push("entropy", "sigma_classical", split.classical);
        t.push("entropy", "sigma_quantum", split.quantum);
        t.push("entropy", "R", split.r.unwrap_or(f64::NAN));
        t.push("entropy", "half_second_moment", split.half_second_moment);
        t.push("entropy", "split_residual", split.split_residual);
        match split.r {
            Some(r) => summary.push(format!("entropy split: sigma = {:.6e}, R = {r:.6e}", split.sigma)),
            None => summary.push("entropy split: vanishing entropy production, R undefined".into()),
        }

        let j = exact_currents(&inst.setup, &inst.lambda1, &inst.lambda)?;
        let mut sigma_flux = 0.0;
        for ((label, v), d) in labels.iter().zip(&j.first).zip(&delta) {
            t.push("exact", format!("J[{label}]"), *v);
            sigma_flux += v * d;
        }
        t.push("exact", "sigma_flux", sigma_flux);
        t.push("exact", "conservation_residual", j.conservation_residual());
    }

    for (l, d) in labels.iter().zip(&delta) {
        t.push("input", format!("delta_lambda[{l}]"), *d);
    }
    let units = "L[k,l] in units of Q_k*Q_l per collision (hbar = 1); sigma in nats per collision; \
                 delta_lambda = lambda_1 - lambda_2";
    let table = t.clone().into_table(units);
    Ok((Outcome { table, summary }, t))
}
