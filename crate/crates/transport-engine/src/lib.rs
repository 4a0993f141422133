//! Linear-response transport between two generalized Gibbs reservoirs.
//!
//! A [`CollisionSetup`] couples subsystem 1 (dimension `d1`) and subsystem 2
//! (dimension `d2`) through a unitary `U` that should conserve every total
//! charge `Q_k⊗I + I⊗Q_k`. Starting from `π₁⊗π₂`, one collision produces
//! `ρ' = U (π₁⊗π₂) U†`, from which currents, entropy production and the
//! Onsager matrix follow.
//!
//! Joint operators are kept in CSR form; local operators are dense.

mod casimir;
mod collide;
mod error;
mod frame;
mod onsager;
mod series;
mod setup;
mod sld;
mod ycov;

#[cfg(test)]
mod testutil;

pub use casimir::{onsager_casimir_check, CasimirReport, TimeReversalSpec};
pub use collide::{collide, entropy_informational, exact_currents, CollisionOutcome, CurrentVector, InformationalEntropy};
pub use error::{Result, TransportError};
pub use frame::JointFrame;
pub use onsager::{
    entropy_split, onsager_finite_difference, onsager_sld, onsager_ycov, transform_affinities, transform_onsager,
    unsymmetrized_onsager,
    EntropySplit, FdScheme, OnsagerMethod, OnsagerReport, DEFAULT_FD_STEP,
};
pub use series::{sld_series_coefficients, tanh_ratio_series};
pub use setup::{check_charge_preservation, ChargePair, CollisionSetup, PreservationReport, SetupOptions};
pub use sld::{gge_derivative, sld, sld_from_state, sld_relation_residual, sld_series};
pub use ycov::{skew_information, skew_information_integral, y_covariance, y_covariance_integral};
