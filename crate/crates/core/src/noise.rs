//! Environmental heating: residual gas and trap-centre displacement noise.

use serde::{Deserialize, Serialize};

use crate::consts::{HBAR, K_B};
use crate::params::{DerivedParams, DisplacementNoise, SystemConfig};
use crate::renorm::ModelCoefficients;

use std::f64::consts::PI;

/// Position-localization and friction rates, rad/s.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseRates {
    /// Gas friction γ.
    pub gamma: f64,
    pub gamma_p: [f64; 3],
    pub gamma_d: [f64; 3],
    pub gamma_r: [f64; 3],
    /// Γ_j = Γ^(r) + Γ^(p) + Γ^(d).
    pub gamma_total: [f64; 3],
    pub sigma: [f64; 3],
}

/// Kinetic-theory friction rate γ for a sphere of radius `radius` and mass
/// `mass` in a gas at pressure `pressure` (Pa) and temperature `temperature`.
pub fn gas_damping(pressure: f64, temperature: f64, molecule_mass: f64, radius: f64, mass: f64) -> f64 {
    0.619 * 6.0 * PI * radius * radius / mass
        * pressure
        * (2.0 * molecule_mass / (PI * K_B * temperature)).sqrt()
}

/// σ_j from a flat displacement PSD in m²/Hz.
pub fn sigma_from_psd(psd: f64, omega: f64, zero_point: f64) -> f64 {
    (psd * omega).sqrt() / zero_point
}

/// Displacement PSD in m²/Hz from σ_j.
pub fn psd_from_sigma(sigma: f64, omega: f64, zero_point: f64) -> f64 {
    sigma * sigma * zero_point * zero_point / omega
}

/// Γ_j^(d) = (π/4) Ω σ².
pub fn displacement_rate(sigma: f64, omega: f64) -> f64 {
    PI / 4.0 * omega * sigma * sigma
}

/// All heating rates. Displacement heating uses the renormalized Ω_j′.
pub fn heating_rates(p: &DerivedParams, mc: &ModelCoefficients, cfg: &SystemConfig) -> NoiseRates {
    let gamma = gas_damping(
        cfg.gas_pressure,
        cfg.gas_temperature,
        cfg.gas_molecule_mass,
        cfg.particle_radius,
        p.mass,
    );
    let sigma = match cfg.displacement_noise {
        DisplacementNoise::Sigma(s) => s,
        DisplacementNoise::Psd(s) => {
            [0, 1, 2].map(|j| sigma_from_psd(s[j], mc.omega_prime[j], p.zero_point[j]))
        }
    };
    let ratio = p.mass * K_B * cfg.gas_temperature / (HBAR * HBAR);
    let gamma_p = p.zero_point.map(|r| ratio * r * r * gamma);
    let gamma_d = [0, 1, 2].map(|j| displacement_rate(sigma[j], mc.omega_prime[j]));
    let gamma_r = mc.gamma_recoil;
    let gamma_total = [0, 1, 2].map(|j| gamma_r[j] + gamma_p[j] + gamma_d[j]);
    NoiseRates { gamma, gamma_p, gamma_d, gamma_r, gamma_total, sigma }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_psd_roundtrip() {
        let (w, r) = (7.6e5, 7.8e-12);
        let s = psd_from_sigma(0.67, w, r);
        assert!((sigma_from_psd(s, w, r) - 0.67).abs() < 1e-15);
    }

    #[test]
    fn zero_pressure_no_damping() {
        assert_eq!(gas_damping(0.0, 300.0, 4.81e-26, 5e-8, 1e-18), 0.0);
    }
}
