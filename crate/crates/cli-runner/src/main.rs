use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cli_runner::commands::{coeffs, onsager, simulate, sweep, verify, Context, Outcome};
use cli_runner::{output, CliError, Method, Result, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "nats", version, about = "Transport coefficients of collisional models with non-commuting charges")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON run configuration; defaults apply when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// CSV destination; standard output when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    method: Option<Method>,
    /// Fock dimension per mode for the bosonic model.
    #[arg(long, global = true)]
    fock_dim: Option<usize>,
    /// Seed for the randomized checks of `verify`.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Onsager matrix by each method, entropy split and exact currents.
    Onsager,
    /// Grid over beta and r of the bosonic coefficients.
    Sweep,
    /// Thermosqueezing coefficients and engine characteristics.
    Coeffs,
    /// Trajectory of repeated collisions.
    Simulate,
    /// Invariant suite; exits nonzero on any failure.
    Verify,
}

fn context(cli: &Cli) -> Result<Context> {
    let config = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default_config(),
    };
    if cli.fock_dim.is_some_and(|d| d < 2) {
        return Err(CliError::Config("--fock-dim must be at least 2".into()));
    }
    Ok(Context {
        config,
        out: cli.out.clone(),
        method: cli.method,
        fock_dim: cli.fock_dim,
        seed: cli.seed,
    })
}

fn finish(ctx: &Context, out: &Outcome) -> Result<()> {
    output::emit(&out.table, ctx.out_path())?;
    for line in &out.summary {
        eprintln!("{line}");
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<()> {
    let ctx = context(cli)?;
    match cli.command {
        Command::Onsager => finish(&ctx, &onsager::run(&ctx)?.0),
        Command::Sweep => finish(&ctx, &sweep::run(&ctx)?),
        Command::Coeffs => finish(&ctx, &coeffs::run(&ctx)?.0),
        Command::Simulate => finish(&ctx, &simulate::run(&ctx)?),
        Command::Verify => {
            let (out, checks) = verify::run(&ctx)?;
            finish(&ctx, &out)?;
            let failed = checks.iter().filter(|c| !c.pass()).count();
            if failed > 0 {
                return Err(CliError::Verification {
                    failed,
                    total: checks.len(),
                });
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("nats: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
