//! Configuration-driven front end: Onsager matrices, parameter sweeps,
//! thermosqueezing coefficients, collision trajectories and self-checks.

pub mod commands;
pub mod config;
pub mod error;
pub mod model;
pub mod output;

pub use commands::{Context, Outcome};
pub use config::{Method, ModelKind, RunConfig, SCHEMA_VERSION};
pub use error::{CliError, Result, EXIT_CONFIG, EXIT_LEAKAGE, EXIT_OK, EXIT_RUNTIME, EXIT_VERIFY};
pub use output::{format_float, Table};
