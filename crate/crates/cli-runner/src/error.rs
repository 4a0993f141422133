use thiserror::Error;

/// Process exit statuses.
pub const EXIT_OK: i32 = 0;
pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_LEAKAGE: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("truncation leakage {leakage:e} above {tolerance:e} at {point}; increase fock_dim or lower the temperature")]
    Leakage { leakage: f64, tolerance: f64, point: String },
    #[error("{failed} of {total} checks failed")]
    Verification { failed: usize, total: usize },
    #[error("{0}")]
    Numerical(String),
    #[error("output error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => EXIT_CONFIG,
            Self::Leakage { .. } => EXIT_LEAKAGE,
            Self::Verification { .. } => EXIT_VERIFY,
            Self::Numerical(_) | Self::Io(_) | Self::Csv(_) => EXIT_RUNTIME,
        }
    }
}

impl From<bosonic_thermosqueezing::BosonicError> for CliError {
    fn from(e: bosonic_thermosqueezing::BosonicError) -> Self {
        use bosonic_thermosqueezing::BosonicError as B;
        match e {
            B::Leakage { leakage, tolerance } => Self::Leakage {
                leakage,
                tolerance,
                point: "requested point".into(),
            },
            B::InvalidDimension(_) | B::InvalidParameter { .. } | B::MuOutOfRange(_) => Self::Config(e.to_string()),
            other => Self::Numerical(other.to_string()),
        }
    }
}

impl From<transport_engine::TransportError> for CliError {
    fn from(e: transport_engine::TransportError) -> Self {
        Self::Numerical(e.to_string())
    }
}

impl From<collision_sim::SimError> for CliError {
    fn from(e: collision_sim::SimError) -> Self {
        match e {
            collision_sim::SimError::NoCollisions => Self::Config(e.to_string()),
            other => Self::Numerical(other.to_string()),
        }
    }
}

impl From<gge_states::GgeError> for CliError {
    fn from(e: gge_states::GgeError) -> Self {
        Self::Config(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
