use bosonic_thermosqueezing::{
    closed_form_onsager, closed_form_r, heat_squeezing_onsager, heat_squeezing_transform, thermo_from_onsager,
    SqueezingPoint,
};
use nalgebra::DMatrix;
use rayon::prelude::*;
use transport_engine::{entropy_split, transform_onsager};

use super::{Context, Outcome};
use crate::config::{Method, ModelKind};
use crate::error::{CliError, Result};
use crate::model::{bosonic_instance, numeric_onsager};
use crate::output::{format_float, Table};

pub const THREADS_ENV: &str = "NATS_THREADS";

pub const COLUMNS: [&str; 13] = [
    "beta", "r", "mu", "alpha", "L11", "L12", "L22", "L_QQ", "L_QA", "L_AA", "R", "S", "ZT",
];

/// Thread cap from `NATS_THREADS`; `None` leaves the rayon default.
pub fn thread_cap() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Config(format!("{THREADS_ENV} must be a positive integer, got {v:?}"))),
        },
    }
}

fn point_row(ctx: &Context, method: Method, beta: f64, r: f64) -> Result<[f64; 13]> {
    let b = &ctx.config.bosonic;
    let p = SqueezingPoint::from_r(beta, r, b.omega, b.gtau)?;
    let variant = b.closed_form.variant();
    let (l, lp, ratio) = if method == Method::Closed {
        let ratio = closed_form_r(p.alpha())?;
        (closed_form_onsager(&p, variant), heat_squeezing_onsager(&p, variant), ratio)
    } else {
        let inst = bosonic_instance(b, beta, r, ctx.fock_dim(), ctx.config.tolerances.leakage)?;
        let rep = numeric_onsager(&inst, method, ctx.config.tolerances.fd_step)?
            .pop()
            .ok_or_else(|| CliError::Config("sweep needs a single method".into()))?;
        let l: DMatrix<f64> = rep.l.view((0, 0), (2, 2)).into_owned();
        let lp = transform_onsager(&l, &heat_squeezing_transform(p.mu))?;
        let split = entropy_split(&inst.setup, &inst.lambda, &inst.delta_lambda())?;
        (l, lp, split.r.unwrap_or(f64::NAN))
    };
    let th = thermo_from_onsager(&lp, p.temperature())?;
    let unit = b.omega * b.omega * b.gtau.sin().powi(2);
    Ok([
        beta,
        r,
        p.mu,
        p.alpha(),
        l[(0, 0)] / unit,
        l[(0, 1)] / unit,
        l[(1, 1)] / unit,
        lp[(0, 0)] / unit,
        lp[(0, 1)] / unit,
        lp[(1, 1)] / unit,
        ratio,
        th.s,
        th.zt,
    ])
}

/// Bosonic grid over `β × r`, rows in grid order (β outer).
pub fn run(ctx: &Context) -> Result<Outcome> {
    let cfg = &ctx.config;
    if cfg.model != ModelKind::Bosonic {
        return Err(CliError::Config("sweep needs the bosonic model".into()));
    }
    let method = ctx.method_or(Method::Closed);
    if method == Method::All {
        return Err(CliError::Config("sweep takes one method: closed, ycov, sld or fd".into()));
    }
    let b = &cfg.bosonic;
    let unit = b.omega * b.omega * b.gtau.sin().powi(2);
    if unit < 1e-300 {
        return Err(CliError::Config("sweep units need sin(gtau) != 0".into()));
    }
    let grid: Vec<(f64, f64)> = cfg
        .sweep
        .beta
        .iter()
        .flat_map(|beta| cfg.sweep.r.iter().map(move |r| (*beta, *r)))
        .collect();
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_cap()? {
        pool = pool.num_threads(n);
    }
    let pool = pool.build().map_err(|e| CliError::Numerical(e.to_string()))?;
    let rows: Vec<Result<[f64; 13]>> =
        pool.install(|| grid.par_iter().map(|(beta, r)| point_row(ctx, method, *beta, *r)).collect());

    let units = format!(
        "method={}; L columns in units of (hbar*omega)^2 sin^2(g*tau), omega={}, g*tau={}; \
         heat/squeezing basis L_QQ, L_QA, L_AA in the same units; R, ZT dimensionless; S in units of 1/(hbar*omega)",
        method_name(method),
        format_float(b.omega),
        format_float(b.gtau)
    );
    let mut table = Table::new(units, &COLUMNS);
    for row in rows {
        table.push(row?.iter().map(|v| format_float(*v)).collect());
    }
    let summary = vec![format!("sweep: {} grid points, method {}", grid.len(), method_name(method))];
    Ok(Outcome { table, summary })
}

pub fn method_name(m: Method) -> &'static str {
    match m {
        Method::Ycov => "ycov",
        Method::Sld => "sld",
        Method::Fd => "fd",
        Method::All => "all",
        Method::Closed => "closed",
    }
}
