//! Coherent-scattering cavity cooling of a levitated nanoparticle.
//!
//! The pipeline runs from lab inputs to observables:
//!
//! ```text
//! SystemConfig -> DerivedParams -> PvConstants -> Displacements
//!              -> ModelCoefficients + NoiseRates -> DriftModel
//!              -> steady state / evolution / PSD
//! ```
//!
//! [`model::Model::build`] runs the whole chain. Numerical kernels are generic
//! over [`scalar::Real`] (`f32` or `f64`); the aliases below fix `f64`.

pub mod analysis;
pub mod cli;
pub mod consts;
pub mod displacements;
pub mod dynamics;
pub mod error;
pub mod model;
pub mod noise;
pub mod numerics;
pub mod params;
pub mod renorm;
pub mod scalar;
pub mod spectra;
pub mod units;

pub use error::{Error, Result};
pub use params::{derive_params, DerivedParams, Detuning, DisplacementNoise, SystemConfig};

/// Drift matrices in double precision.
pub type DriftModel = dynamics::DriftModel<f64>;
/// Moment state in double precision.
pub type MomentState = dynamics::MomentState<f64>;
/// Master-equation rates in double precision.
pub type DriftInputs = dynamics::DriftInputs<f64>;
/// Spectrum in double precision.
pub type SpectrumResult = spectra::SpectrumResult<f64>;
/// Complex double.
pub type C64 = num_complex::Complex64;
