//! Closed moment dynamics of the cavity and the three COM modes.

pub mod drift;
pub mod generator;
pub mod moments;
pub mod solve;

pub use drift::{DriftInputs, DriftModel};
pub use moments::{
    bose_occupation, occupation_to_temperature, temperatures, thermal_state, MomentState, N_SECOND,
};
pub use solve::{evolve, evolve_at, stability, steady_state, StabilityReport};
