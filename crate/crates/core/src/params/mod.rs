//! Lab-level configuration and the static coefficients derived from it.

mod file;

pub use file::{format_config, parse_config, CONFIG_KEYS};

use serde::{Deserialize, Serialize};

use crate::consts::{AIR_MOLECULE_MASS, C, EPS0, HBAR, PA_PER_MBAR, TWO_PI};
use crate::error::{Error, Result};

use std::f64::consts::PI;

/// How the cavity detuning is specified.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Detuning {
    /// Renormalized detuning δ′ measured with the particle inside, rad/s.
    Target(f64),
    /// Empty-cavity detuning δ_bare = ω_c + Δ_A − ω₀, rad/s.
    Bare(f64),
}

impl Detuning {
    pub fn value(self) -> f64 {
        match self {
            Detuning::Target(d) | Detuning::Bare(d) => d,
        }
    }
}

/// Trap-displacement noise level per axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum DisplacementNoise {
    /// Flat two-sided PSD S_jj near Ω_j, m²/Hz.
    Psd([f64; 3]),
    /// Dimensionless amplitude σ_j, with σ_j² = S_jj Ω_j / r_j0².
    Sigma([f64; 3]),
}

/// Raw inputs, SI units, angular rates in rad/s.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemConfig {
    pub tweezer_power: f64,
    pub tweezer_wavelength: f64,
    pub tweezer_waist: f64,
    pub asym_x: f64,
    pub asym_y: f64,
    pub cavity_length: f64,
    pub cavity_waist: f64,
    /// Field decay rate κ (half the energy linewidth).
    pub cavity_halfwidth: f64,
    pub particle_radius: f64,
    pub rel_permittivity: f64,
    pub mass_density: f64,
    pub theta: f64,
    pub phi: f64,
    pub detuning: Detuning,
    pub gas_pressure: f64,
    pub gas_temperature: f64,
    pub gas_molecule_mass: f64,
    pub displacement_noise: DisplacementNoise,
    pub pv_cutoff_factor: f64,
    /// Adds the incoherent Υ cavity-COM term to the dissipator.
    pub include_upsilon: bool,
}

impl SystemConfig {
    /// Tweezer, cavity and particle of the reference experiment, operated at
    /// Θ = 10°, δ′ = 2π×400 kHz, φ = π/4 and 3e-3 mbar.
    pub fn reference() -> Self {
        SystemConfig {
            tweezer_power: 0.5,
            tweezer_wavelength: 1.55e-6,
            tweezer_waist: 1.08e-6,
            asym_x: 1.03,
            asym_y: 0.89,
            cavity_length: 6.46e-3,
            cavity_waist: 48e-6,
            cavity_halfwidth: TWO_PI * 0.53e6,
            particle_radius: 50e-9,
            rel_permittivity: 2.07,
            mass_density: 2200.0,
            theta: 10f64.to_radians(),
            phi: PI / 4.0,
            detuning: Detuning::Target(TWO_PI * 400e3),
            gas_pressure: 3e-3 * PA_PER_MBAR,
            gas_temperature: 300.0,
            gas_molecule_mass: AIR_MOLECULE_MASS,
            displacement_noise: DisplacementNoise::Sigma([0.67, 0.26, 18.6]),
            pv_cutoff_factor: 0.1,
            include_upsilon: false,
        }
    }

    /// Checks the domain invariants.
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("tweezer_power", self.tweezer_power),
            ("tweezer_wavelength", self.tweezer_wavelength),
            ("tweezer_waist", self.tweezer_waist),
            ("cavity_length", self.cavity_length),
            ("cavity_waist", self.cavity_waist),
            ("cavity_halfwidth", self.cavity_halfwidth),
            ("particle_radius", self.particle_radius),
            ("mass_density", self.mass_density),
            ("gas_pressure", self.gas_pressure),
            ("gas_temperature", self.gas_temperature),
            ("gas_molecule_mass", self.gas_molecule_mass),
            ("pv_cutoff_factor", self.pv_cutoff_factor),
        ];
        for (key, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Config(format!("{key} must be finite and > 0, got {v}")));
            }
        }
        for (key, a) in [("asym_x", self.asym_x), ("asym_y", self.asym_y)] {
            if !(a > 0.2 && a < 5.0) {
                return Err(Error::Config(format!("{key} must lie in (0.2, 5), got {a}")));
            }
        }
        if !(self.theta >= 0.0 && self.theta < PI) {
            return Err(Error::Config(format!("theta must lie in [0, π), got {}", self.theta)));
        }
        if !(self.phi >= 0.0 && self.phi <= PI / 2.0 + 1e-12) {
            return Err(Error::Config(format!("phi must lie in [0, π/2], got {}", self.phi)));
        }
        if !(self.rel_permittivity > 1.0) {
            return Err(Error::Config(format!(
                "rel_permittivity must exceed 1, got {}",
                self.rel_permittivity
            )));
        }
        let lam = self.tweezer_wavelength;
        for (key, w) in [("tweezer_waist", self.tweezer_waist), ("cavity_waist", self.cavity_waist)] {
            if w < lam / 10.0 {
                return Err(Error::Config(format!(
                    "{key} = {w:e} m is below λ₀/10, paraxial model invalid"
                )));
            }
        }
        if !self.detuning.value().is_finite() {
            return Err(Error::Config("detuning must be finite".into()));
        }
        let noise = match self.displacement_noise {
            DisplacementNoise::Psd(s) | DisplacementNoise::Sigma(s) => s,
        };
        if noise.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::Config("displacement noise must be finite and >= 0".into()));
        }
        Ok(())
    }

    /// Copy with the tweezer power scaled by `factor`.
    pub fn with_power_scaled(&self, factor: f64) -> Self {
        SystemConfig { tweezer_power: self.tweezer_power * factor, ..self.clone() }
    }
}

/// `sin_cos` with round-off at multiples of π/2 snapped to exact zeros, so
/// nodes and perpendicular polarizations decouple exactly.
pub fn sin_cos(angle: f64) -> (f64, f64) {
    let (s, c) = angle.sin_cos();
    let snap = |v: f64| if v.abs() < 1e-15 { 0.0 } else { v };
    (snap(s), snap(c))
}

/// Static Hamiltonian coefficients, SI units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivedParams {
    pub mass: f64,
    pub volume: f64,
    pub eps_c: f64,
    pub polarizability: f64,
    pub omega0: f64,
    pub k0: f64,
    pub rayleigh: f64,
    pub field_amp: f64,
    pub omega_c: f64,
    pub k_c: f64,
    pub mode_volume: f64,
    pub finesse: f64,
    /// Bare trap frequencies Ω_x, Ω_y, Ω_z.
    pub trap_freqs: [f64; 3],
    /// Zero-point amplitudes r_j0.
    pub zero_point: [f64; 3],
    pub coupling_g: f64,
    /// ω_c ε_c V / (2 V_c): common prefactor of Δ_c and g_cj.
    pub cavity_shift_scale: f64,
    pub g_cx: f64,
    pub g_cy: f64,
    pub delta_c: f64,
    pub eta: f64,
    pub cutoff: f64,
    pub kappa: f64,
    pub theta: f64,
    pub phi: f64,
}

/// Computes all static coefficients from the configuration.
pub fn derive_params(cfg: &SystemConfig) -> Result<DerivedParams> {
    cfg.validate()?;
    Ok(derive_unchecked(cfg))
}

pub(crate) fn derive_unchecked(cfg: &SystemConfig) -> DerivedParams {
    let r = cfg.particle_radius;
    let volume = 4.0 * PI * r.powi(3) / 3.0;
    let mass = cfg.mass_density * volume;
    let eps = cfg.rel_permittivity;
    let eps_c = 3.0 * (eps - 1.0) / (eps + 2.0);
    let polarizability = EPS0 * eps_c * volume;

    let lam = cfg.tweezer_wavelength;
    let wt = cfg.tweezer_waist;
    let omega0 = TWO_PI * C / lam;
    let k0 = omega0 / C;
    let rayleigh = PI * wt * wt / lam;
    let field_amp =
        (4.0 * cfg.tweezer_power / (PI * EPS0 * C * wt * wt * cfg.asym_x * cfg.asym_y)).sqrt();

    let pref = (EPS0 * eps_c * field_amp * field_amp / (2.0 * cfg.mass_density * wt * wt)).sqrt();
    let trap_freqs = [
        pref * 2f64.sqrt() / cfg.asym_x,
        pref * 2f64.sqrt() / cfg.asym_y,
        pref * lam / (PI * wt),
    ];
    let zero_point = trap_freqs.map(|w| (HBAR / (2.0 * mass * w)).sqrt());

    let omega_c = omega0 + cfg.detuning.value();
    let k_c = omega_c / C;
    let mode_volume = PI * cfg.cavity_waist.powi(2) * cfg.cavity_length / 4.0;
    let finesse = PI * C / (2.0 * cfg.cavity_halfwidth * cfg.cavity_length);

    let (st, ct) = sin_cos(cfg.theta);
    let (sp, cp) = sin_cos(cfg.phi);
    let coupling_g = EPS0 * eps_c * volume * field_amp * ct
        * (omega_c / (2.0 * HBAR * EPS0 * mode_volume)).sqrt();
    let cavity_shift_scale = omega_c * eps_c * volume / (2.0 * mode_volume);
    let sin2p = 2.0 * sp * cp;
    let g_cx = cavity_shift_scale * k_c * zero_point[0] * sin2p * st;
    let g_cy = cavity_shift_scale * k_c * zero_point[1] * sin2p * ct;
    let delta_c = cavity_shift_scale * cp * cp;
    let eta = ct * (EPS0 * mode_volume * field_amp * field_amp / (HBAR * omega_c)).sqrt();
    let cutoff = cfg.pv_cutoff_factor / r;

    DerivedParams {
        mass,
        volume,
        eps_c,
        polarizability,
        omega0,
        k0,
        rayleigh,
        field_amp,
        omega_c,
        k_c,
        mode_volume,
        finesse,
        trap_freqs,
        zero_point,
        coupling_g,
        cavity_shift_scale,
        g_cx,
        g_cy,
        delta_c,
        eta,
        cutoff,
        kappa: cfg.cavity_halfwidth,
        theta: cfg.theta,
        phi: cfg.phi,
    }
}

impl DerivedParams {
    /// Bare coherent-scattering couplings g_j for a given cavity amplitude α_c.
    pub fn bare_couplings(&self, alpha_c: num_complex::Complex64) -> [num_complex::Complex64; 3] {
        use num_complex::Complex64 as C64;
        let (st, ct) = sin_cos(self.theta);
        let (sp, cp) = sin_cos(self.phi);
        let half_g = 0.5 * self.coupling_g;
        let [x0, y0, z0] = self.zero_point;
        [
            -(C64::from(half_g * self.k_c * x0 * sp * st) + alpha_c * self.g_cx),
            -(C64::from(half_g * self.k_c * y0 * sp * ct) + alpha_c * self.g_cy),
            C64::new(0.0, half_g * self.k0 * z0 * cp),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_geometry() {
        let p = derive_params(&SystemConfig::reference()).unwrap();
        assert!((p.volume / 5.2360e-22 - 1.0).abs() < 1e-4);
        assert!((p.mass / 1.1519e-18 - 1.0).abs() < 1e-4);
        assert!((p.eps_c / 0.78870 - 1.0).abs() < 1e-4);
    }

    #[test]
    fn rejects_bad_inputs() {
        let mut c = SystemConfig::reference();
        c.rel_permittivity = 1.0;
        assert!(derive_params(&c).is_err());
        let mut c = SystemConfig::reference();
        c.tweezer_waist = 1e-7;
        assert!(derive_params(&c).is_err());
        let mut c = SystemConfig::reference();
        c.asym_x = 6.0;
        assert!(derive_params(&c).is_err());
        let mut c = SystemConfig::reference();
        c.phi = 2.0;
        assert!(derive_params(&c).is_err());
    }

    #[test]
    fn node_and_parallel_polarization() {
        let mut c = SystemConfig::reference();
        c.theta = PI / 2.0;
        let p = derive_params(&c).unwrap();
        assert_eq!(p.coupling_g, 0.0);
        assert_eq!(p.eta, 0.0);
        assert_eq!(p.g_cy, 0.0);
        c.theta = 0.3;
        c.phi = PI / 2.0;
        let p = derive_params(&c).unwrap();
        assert_eq!(p.delta_c, 0.0);
        assert_eq!(p.g_cx, 0.0);
    }
}
