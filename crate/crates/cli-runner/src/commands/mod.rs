//! Subcommand implementations. Each returns a table and console summary lines.

use std::path::PathBuf;

use crate::config::{Method, RunConfig};
use crate::output::Table;

pub mod coeffs;
pub mod onsager;
pub mod simulate;
pub mod sweep;
pub mod verify;

/// Configuration plus command-line overrides.
#[derive(Debug, Clone)]
pub struct Context {
    pub config: RunConfig,
    pub out: Option<PathBuf>,
    pub method: Option<Method>,
    pub fock_dim: Option<usize>,
    pub seed: u64,
}

impl Context {
    pub fn new(config: RunConfig) -> Self {
        Self {
            config,
            out: None,
            method: None,
            fock_dim: None,
            seed: 0,
        }
    }

    /// Command-line method, then config method, then `default`.
    pub fn method_or(&self, default: Method) -> Method {
        self.method.or(self.config.method).unwrap_or(default)
    }

    pub fn fock_dim(&self) -> usize {
        self.fock_dim.unwrap_or(self.config.bosonic.fock_dim)
    }

    pub fn out_path(&self) -> Option<&std::path::Path> {
        self.out.as_deref().or(self.config.output.as_deref())
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub table: Table,
    pub summary: Vec<String>,
}
