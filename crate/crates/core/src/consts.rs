//! Physical constants (CODATA 2018, SI).

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant, J/K.
pub const K_B: f64 = 1.380_649e-23;
/// Vacuum permittivity, F/m.
pub const EPS0: f64 = 8.854_187_812_8e-12;
/// Speed of light, m/s.
pub const C: f64 = 299_792_458.0;

pub const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Pascal per millibar.
pub const PA_PER_MBAR: f64 = 100.0;

/// Mean mass of an air molecule, kg.
pub const AIR_MOLECULE_MASS: f64 = 4.81e-26;
