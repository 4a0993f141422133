use collision_sim::{run_collisions, Evaluation};

use super::{Context, Outcome};
use crate::error::Result;
use crate::model::build_instance;
use crate::output::{format_float, Table};

/// Collision trajectory between reservoir 1 at `λ + δλ` and reservoir 2 at `λ`.
pub fn run(ctx: &Context) -> Result<Outcome> {
    let cfg = &ctx.config;
    let inst = build_instance(cfg, ctx.fock_dim)?;
    let how = match cfg.simulate.evaluation.as_str() {
        "schrodinger" => Evaluation::Schrodinger,
        _ => Evaluation::Heisenberg,
    };
    let traj = run_collisions(&inst.setup, &inst.lambda1, &inst.lambda, cfg.simulate.collisions, how)?;
    let deltas: Vec<String> = traj
        .labels
        .iter()
        .zip(&traj.delta_lambda)
        .map(|(l, d)| format!("{l}:{}", format_float(*d)))
        .collect();
    let units = format!(
        "J_k = change of Q_k in unit 1 per collision (hbar = 1); sigma in nats; delta_lambda = {}",
        deltas.join(" ")
    );
    let mut table = Table::new(units, &[]);
    table.header = traj.header();
    for r in &traj.records {
        let mut row = vec![r.step.to_string()];
        row.extend(r.currents.first.iter().map(|v| format_float(*v)));
        row.push(format_float(r.sigma));
        row.extend(r.cumulative_charges.iter().map(|v| format_float(*v)));
        row.push(format_float(r.cumulative_sigma));
        table.push(row);
    }
    let summary = vec![format!(
        "simulate: {} collisions, cumulative sigma = {:.6e}, linearity residual = {:.3e}",
        traj.len(),
        traj.last().map_or(0.0, |r| r.cumulative_sigma),
        traj.linearity_residual()
    )];
    Ok(Outcome { table, summary })
}
