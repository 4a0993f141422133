use bosonic_thermosqueezing::{engine_from_onsager, heat_squeezing_onsager, heat_squeezing_transform, EngineReport, SqueezingPoint};
use nalgebra::DMatrix;
use transport_engine::transform_onsager;

use super::{Context, Outcome};
use crate::config::{Method, ModelKind};
use crate::error::{CliError, Result};
use crate::model::{build_instance, numeric_onsager};
use crate::output::LongTable;

/// Intervals in the extraction scan over `[0, 2 δμ_stop]`.
pub const SCAN_INTERVALS: usize = 200;

/// Heat/squeezing Onsager matrix by the requested method.
fn heat_squeezing(ctx: &Context, method: Method) -> Result<(DMatrix<f64>, f64)> {
    let b = &ctx.config.bosonic;
    if method == Method::Closed {
        let p = SqueezingPoint::from_r(b.beta, b.r(), b.omega, b.gtau)?;
        return Ok((heat_squeezing_onsager(&p, b.closed_form.variant()), p.beta));
    }
    let inst = build_instance(&ctx.config, ctx.fock_dim)?;
    let b = inst.bosonic.as_ref().expect("bosonic instance");
    let p = &b.point;
    let rep = numeric_onsager(&inst, method, ctx.config.tolerances.fd_step)?
        .pop()
        .ok_or_else(|| CliError::Config("coeffs needs a single method".into()))?;
    let l = rep.l.view((0, 0), (2, 2)).into_owned();
    Ok((transform_onsager(&l, &heat_squeezing_transform(p.mu))?, p.beta))
}

/// Thermosqueezing coefficients and engine characteristics at the configured point.
pub fn run(ctx: &Context) -> Result<(Outcome, LongTable)> {
    let cfg = &ctx.config;
    if cfg.model != ModelKind::Bosonic {
        return Err(CliError::Config("coeffs needs the bosonic model".into()));
    }
    let method = ctx.method_or(Method::Closed);
    if method == Method::All {
        return Err(CliError::Config("coeffs takes one method: closed, ycov, sld or fd".into()));
    }
    let (lp, beta) = heat_squeezing(ctx, method)?;
    let engine = engine_from_onsager(&lp, beta, cfg.bosonic.delta_beta)?;
    let c = &engine.coefficients;
    let m = crate::commands::sweep::method_name(method);
    let mut t = LongTable::default();
    for (q, v) in [
        ("T", c.temperature),
        ("L_QQ", c.l_qq),
        ("L_QA", c.l_qa),
        ("L_AQ", c.l_aq),
        ("L_AA", c.l_aa),
        ("kappa", c.kappa),
        ("G", c.g),
        ("S", c.s),
        ("Pi", c.pi),
        ("ZT", c.zt),
        ("kappa_signed", c.kappa_signed),
        ("G_signed", c.g_signed),
        ("kappa_open_circuit", c.kappa_open_circuit),
        ("delta_beta", engine.delta_beta),
        ("delta_mu_stop", engine.delta_mu_stop),
        ("delta_mu_fridge", engine.delta_mu_fridge.unwrap_or(f64::NAN)),
    ] {
        t.push(m, q, v);
    }
    let op = engine.at(cfg.bosonic.delta_mu);
    for (q, v) in [
        ("delta_mu", op.delta_mu),
        ("J_Q", op.j_q),
        ("J_A", op.j_a),
        ("power", op.power),
        ("sigma", op.sigma),
        ("heat", op.heat),
        ("heat_split", op.heat_split),
        ("heat_split_open_circuit", op.heat_split_open_circuit),
    ] {
        t.push("operating_point", q, v);
    }
    let (lo, hi) = scan_window(&engine);
    let scan = engine.scan(lo, hi, SCAN_INTERVALS);
    let mut summary = vec![format!(
        "T = {:.6e}: kappa = {:.6e}, G = {:.6e}, S = {:.6e}, Pi = {:.6e}, ZT = {:.6e}",
        c.temperature, c.kappa, c.g, c.s, c.pi, c.zt
    )];
    if let Some(best) = EngineReport::best_extraction(&scan).filter(|p| p.power < 0.0) {
        t.push("scan", "delta_mu_best", best.delta_mu);
        t.push("scan", "power_best", best.power);
        t.push("scan", "grid_step", (hi - lo) / SCAN_INTERVALS as f64);
        summary.push(format!(
            "engine: power extracted for delta_mu between 0 and {:.6e}, best at {:.6e}",
            engine.delta_mu_stop, best.delta_mu
        ));
    } else {
        summary.push("engine: no power extraction window".into());
    }
    let units = "hbar = k_B = 1; L in units of Q_k*Q_l per collision; kappa, G, S, Pi, ZT from L_QQ, L_QA, L_AQ, L_AA; \
                 power and currents per collision";
    let table = t.clone().into_table(units);
    Ok((Outcome { table, summary }, t))
}

/// `[min(0, 2δμ_stop), max(0, 2δμ_stop)]`.
pub fn scan_window(e: &EngineReport) -> (f64, f64) {
    let edge = 2.0 * e.delta_mu_stop;
    (edge.min(0.0), edge.max(0.0))
}
