//! JSON run configuration. Every object rejects unknown keys.

use serde::Deserialize;
use std::f64::consts::FRAC_PI_2;
use std::path::{Path, PathBuf};

use crate::error::{CliError, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    #[default]
    Bosonic,
    QubitDemo,
    CustomMatrices,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Ycov,
    Sld,
    Fd,
    #[default]
    All,
    /// Closed forms only (bosonic model).
    Closed,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    #[serde(default)]
    pub model: ModelKind,
    #[serde(default)]
    pub bosonic: BosonicParams,
    #[serde(default)]
    pub qubit_demo: QubitDemoParams,
    #[serde(default)]
    pub custom: Option<CustomModel>,
    #[serde(default)]
    pub sweep: SweepGrid,
    #[serde(default)]
    pub simulate: SimulateParams,
    #[serde(default)]
    pub method: Option<Method>,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub tolerances: Tolerances,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BosonicParams {
    pub beta: f64,
    /// Squeezing parameter; exclusive with `mu`.
    pub r: Option<f64>,
    /// Squeezing potential `tanh(2r)`; exclusive with `r`.
    pub mu: Option<f64>,
    pub omega: f64,
    pub gtau: f64,
    pub fock_dim: usize,
    pub delta_beta: f64,
    pub delta_mu: f64,
    pub include_q3: bool,
    /// Moment convention used by closed forms.
    pub closed_form: ClosedForm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ClosedForm {
    #[default]
    Exact,
    /// Second moment of `A` with `n̄/2` in place of `n̄`.
    Printed,
}

impl ClosedForm {
    pub fn variant(self) -> bosonic_thermosqueezing::MomentVariant {
        match self {
            Self::Exact => bosonic_thermosqueezing::MomentVariant::Exact,
            Self::Printed => bosonic_thermosqueezing::MomentVariant::Printed,
        }
    }
}

impl Default for BosonicParams {
    fn default() -> Self {
        Self {
            beta: 1.0,
            r: None,
            mu: None,
            omega: 1.0,
            gtau: FRAC_PI_2,
            fock_dim: 60,
            delta_beta: 1e-3,
            delta_mu: 5e-4,
            include_q3: false,
            closed_form: ClosedForm::Exact,
        }
    }
}

impl BosonicParams {
    /// `μ`, from whichever of `r`, `mu` is set (zero when neither is).
    pub fn mu(&self) -> f64 {
        match (self.r, self.mu) {
            (_, Some(mu)) => mu,
            (Some(r), None) => (2.0 * r).tanh(),
            (None, None) => 0.0,
        }
    }

    /// `r`, exact when given directly.
    pub fn r(&self) -> f64 {
        self.r.unwrap_or_else(|| 0.5 * self.mu().atanh())
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QubitDemoParams {
    /// Partial-swap angle.
    pub theta: f64,
    /// Affinities for `(σz, σx)` of the reference state.
    pub lambda: Vec<f64>,
    /// Reservoir-1 offset for `simulate`.
    pub delta_lambda: Vec<f64>,
}

impl Default for QubitDemoParams {
    fn default() -> Self {
        Self {
            theta: 0.6,
            lambda: vec![0.7, 0.3],
            delta_lambda: vec![0.05, -0.02],
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexMatrix {
    pub re: Vec<Vec<f64>>,
    #[serde(default)]
    pub im: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomCharge {
    pub label: String,
    pub first: ComplexMatrix,
    /// Defaults to `first`.
    #[serde(default)]
    pub second: Option<ComplexMatrix>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomModel {
    pub d1: usize,
    pub d2: usize,
    pub charges: Vec<CustomCharge>,
    pub unitary: ComplexMatrix,
    pub lambda: Vec<f64>,
    #[serde(default)]
    pub delta_lambda: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepGrid {
    pub beta: Vec<f64>,
    pub r: Vec<f64>,
}

impl Default for SweepGrid {
    fn default() -> Self {
        Self {
            beta: vec![0.5, 1.0, 2.0],
            r: vec![0.0, 0.5, 1.0, 1.5],
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimulateParams {
    pub collisions: usize,
    /// `heisenberg` evolves charges; `schrodinger` forms the joint state.
    pub evaluation: String,
}

impl Default for SimulateParams {
    fn default() -> Self {
        Self {
            collisions: 100,
            evaluation: "heisenberg".into(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub leakage: f64,
    pub fd_step: f64,
    pub cross_method: f64,
    /// Replaces every per-check tolerance of `verify` when set.
    pub verify: Option<f64>,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            leakage: bosonic_thermosqueezing::LEAKAGE_TOLERANCE,
            fd_step: transport_engine::DEFAULT_FD_STEP,
            cross_method: 1e-6,
            verify: None,
        }
    }
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(bad(format!("{name} must be positive and finite, got {v}")))
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| bad(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Defaults for every section.
    pub fn default_config() -> Self {
        Self::parse(&format!("{{\"schema_version\": {SCHEMA_VERSION}}}")).expect("defaults are valid")
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(bad(format!(
                "schema_version {} unsupported, expected {SCHEMA_VERSION}",
                self.schema_version
            )));
        }
        let b = &self.bosonic;
        positive("bosonic.beta", b.beta)?;
        positive("bosonic.omega", b.omega)?;
        positive("bosonic.delta_beta", b.delta_beta)?;
        if !b.gtau.is_finite() || !b.delta_mu.is_finite() {
            return Err(bad("bosonic.gtau and bosonic.delta_mu must be finite"));
        }
        if b.r.is_some() && b.mu.is_some() {
            return Err(bad("set only one of bosonic.r and bosonic.mu"));
        }
        if let Some(r) = b.r {
            if !r.is_finite() {
                return Err(bad("bosonic.r must be finite"));
            }
        }
        if let Some(mu) = b.mu {
            if !(mu.abs() < 1.0) {
                return Err(bad(format!("bosonic.mu must satisfy |mu| < 1, got {mu}")));
            }
        }
        if b.fock_dim < 2 {
            return Err(bad(format!("bosonic.fock_dim must be at least 2, got {}", b.fock_dim)));
        }
        if self.sweep.beta.is_empty() || self.sweep.r.is_empty() {
            return Err(bad("sweep grids must be non-empty"));
        }
        for v in &self.sweep.beta {
            positive("sweep.beta entries", *v)?;
        }
        if self.sweep.r.iter().any(|r| !r.is_finite()) {
            return Err(bad("sweep.r entries must be finite"));
        }
        if self.simulate.collisions == 0 {
            return Err(bad("simulate.collisions must be at least 1"));
        }
        if !matches!(self.simulate.evaluation.as_str(), "heisenberg" | "schrodinger") {
            return Err(bad("simulate.evaluation must be heisenberg or schrodinger"));
        }
        let q = &self.qubit_demo;
        if q.lambda.len() != 2 || q.delta_lambda.len() != 2 {
            return Err(bad("qubit_demo.lambda and qubit_demo.delta_lambda need two entries"));
        }
        let t = &self.tolerances;
        positive("tolerances.leakage", t.leakage)?;
        positive("tolerances.fd_step", t.fd_step)?;
        positive("tolerances.cross_method", t.cross_method)?;
        if let Some(v) = t.verify {
            positive("tolerances.verify", v)?;
        }
        if self.model == ModelKind::CustomMatrices && self.custom.is_none() {
            return Err(bad("model custom-matrices needs a custom section"));
        }
        if self.method == Some(Method::Closed) && self.model != ModelKind::Bosonic {
            return Err(bad("method closed exists only for the bosonic model"));
        }
        Ok(())
    }
}
