//! Two bosonic modes exchanging energy `H = ω(p² + x²)/2` and squeezing
//! asymmetry `A = ω(p² − x²)/2` through beam-splitter collisions.
//!
//! Numerics run in a truncated Fock space; [`BosonicModel`] tracks how much
//! equilibrium weight falls outside the sectors that truncation leaves intact.
//! Closed forms for the Onsager matrix, the thermosqueezing coefficients and
//! the engine windows live alongside for comparison.

mod closed;
mod error;
mod fock;
mod model;
mod symplectic;
mod thermo;

pub use closed::{
    closed_form_onsager, closed_form_r, heat_squeezing_onsager, heat_squeezing_transform, squeezed_moments, variance_d,
    MomentVariant, SqueezedMoments, SqueezingPoint,
};
pub use error::{BosonicError, Result};
pub use fock::{build_fock, build_fock_in_frame, FockSpace};
pub use model::{beam_splitter, bosonic_setup, sector_mask, BosonicModel, LEAKAGE_TOLERANCE};
pub use symplectic::{charge_forms, symplectic_charge_check, symplectic_form, ChargeCheck, SymplecticMatrix, SYMPLECTIC_TOL};
pub use thermo::{
    engine_analysis, engine_from_onsager, thermo_coefficients, thermo_from_onsager, EngineReport, OperatingPoint,
    ThermoCoefficients,
};
