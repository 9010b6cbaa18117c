//! Shifts and rates induced by tracing out the free-field and cavity-output
//! reservoirs, and the inversion from a measured detuning δ′ back to δ̃.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::consts::{C, EPS0, HBAR, K_B};
use crate::displacements::{solve_displacements, Displacements, PvConstants};
use crate::error::{Error, Result};
use crate::numerics::pv_cubic_integral;
use crate::params::{sin_cos, DerivedParams};

use std::f64::consts::PI;

/// Coefficients of the final cavity + COM master equation, SI units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelCoefficients {
    /// δ̃ used for the displacements.
    pub delta_tilde: f64,
    /// δ₀ = δ̃ − 2 g_cx β_x − 2 g_cy β_y.
    pub delta_0: f64,
    /// δ′ = δ₀ + Δ_A + Δ_B1.
    pub delta_prime: f64,
    /// δ_bare = δ̃ + Δ_c + Δ_A, the empty-cavity detuning.
    pub delta_bare: f64,
    pub delta_a: f64,
    pub delta_b1: f64,
    pub kappa_b1: f64,
    pub kappa_prime: f64,
    /// Bare recoil rates before the χ² rescaling.
    pub gamma_recoil_bare: [f64; 3],
    /// Γ_j^(r) = χ_j² × bare.
    pub gamma_recoil: [f64; 3],
    pub delta_j: [f64; 3],
    pub omega_prime: [f64; 3],
    pub chi: [f64; 3],
    /// Bare couplings g_j at the solved α_c.
    pub g_bare: [Complex64; 3],
    pub g_tilde_z: Complex64,
    pub g_prime: [Complex64; 3],
    pub upsilon_z: Complex64,
    /// Υ = Υ_z χ_z.
    pub upsilon: Complex64,
    /// Whether Υ enters the dissipator.
    pub include_upsilon: bool,
}

impl ModelCoefficients {
    /// True when Υ is left out but exceeds 1% of |g_z′|.
    pub fn upsilon_warning(&self) -> bool {
        !self.include_upsilon && self.upsilon.norm() > 0.01 * self.g_prime[2].norm()
    }
}

/// Δ_A = (2κ/π) k_B T / (ħ ω₀), leading term of the exponential-integral asymptotics.
pub fn cavity_lamb_shift(kappa: f64, temperature: f64, omega0: f64) -> f64 {
    2.0 * kappa / PI * K_B * temperature / (HBAR * omega0)
}

/// Evaluates every reservoir-induced coefficient at fixed δ̃.
pub fn renormalize(
    p: &DerivedParams,
    pv: &PvConstants,
    d: &Displacements,
    delta_tilde: f64,
    temperature: f64,
    include_upsilon: bool,
) -> Result<ModelCoefficients> {
    let (_, ct) = sin_cos(p.theta);
    let (_, cp) = sin_cos(p.phi);
    let [bx, by, _] = d.beta;
    let delta_0 = delta_tilde - 2.0 * p.g_cx * bx - 2.0 * p.g_cy * by;
    let delta_a = cavity_lamb_shift(p.kappa, temperature, p.omega0);

    let k1 = (p.omega0 + delta_0) / C;
    let lead_b1 = (p.eps_c * p.volume * cp / (2.0 * PI)).powi(2) * p.omega_c / (3.0 * p.mode_volume);
    let delta_b1 = -lead_b1 * pv_cubic_integral(k1, p.cutoff);
    let kappa_b1 = lead_b1 * PI * k1.powi(3);

    let [x0, y0, z0] = p.zero_point;
    let k0 = p.k0;
    let field = (p.eps_c * p.volume * p.field_amp / (2.0 * PI)).powi(2) * EPS0 / (30.0 * HBAR);
    let geom = [x0 * x0, 2.0 * y0 * y0, 7.0 * z0 * z0];
    let gamma_recoil_bare = geom.map(|g| PI * field * k0.powi(5) * g);
    let delta_j = [
        -field * x0 * x0 * pv.pv_quintic,
        -field * 2.0 * y0 * y0 * pv.pv_quintic,
        -field * z0 * z0 * (2.0 * pv.pv_quintic + 5.0 * k0 * k0 * pv.pv_cubic),
    ];

    let mut omega_prime = [0.0; 3];
    let mut chi = [0.0; 3];
    for j in 0..3 {
        let radicand = 1.0 + 4.0 * delta_j[j] / p.trap_freqs[j];
        if !(radicand > 0.0) {
            return Err(Error::ModelBreakdown { axis: ['x', 'y', 'z'][j], radicand });
        }
        omega_prime[j] = p.trap_freqs[j] * radicand.sqrt();
        chi[j] = radicand.powf(-0.25);
    }
    let gamma_recoil = [0, 1, 2].map(|j| gamma_recoil_bare[j] * chi[j] * chi[j]);

    let wc0 = p.omega_c * pv.c0 * cp * ct;
    let upsilon_z = Complex64::new(0.0, wc0);
    let g_tilde_z = Complex64::new(0.0, wc0 * (-pv.pv_cubic / (PI * k0.powi(3))));
    let g_bare = p.bare_couplings(d.alpha_c);
    let g_prime = [
        g_bare[0] * chi[0],
        g_bare[1] * chi[1],
        (g_bare[2] + g_tilde_z) * chi[2],
    ];

    Ok(ModelCoefficients {
        delta_tilde,
        delta_0,
        delta_prime: delta_0 + delta_a + delta_b1,
        delta_bare: delta_tilde + p.delta_c + delta_a,
        delta_a,
        delta_b1,
        kappa_b1,
        kappa_prime: p.kappa + kappa_b1,
        gamma_recoil_bare,
        gamma_recoil,
        delta_j,
        omega_prime,
        chi,
        g_bare,
        g_tilde_z,
        g_prime,
        upsilon_z,
        upsilon: upsilon_z * chi[2],
        include_upsilon,
    })
}

/// Self-consistent solution at a prescribed detuning.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solved {
    pub delta_tilde: f64,
    pub displacements: Displacements,
    pub coeffs: ModelCoefficients,
    pub iterations: usize,
}

/// Maximum fixed-point iterations of [`invert_detuning`].
pub const MAX_INVERSION_ITERATIONS: usize = 50;
/// Convergence threshold on |δ′ − target|, rad/s.
pub const INVERSION_TOL: f64 = 2.0 * PI * 1e-3;

/// Finds δ̃ such that the renormalized detuning equals `target`.
pub fn invert_detuning(
    p: &DerivedParams,
    pv: &PvConstants,
    target: f64,
    temperature: f64,
    include_upsilon: bool,
) -> Result<Solved> {
    let (_, cp) = sin_cos(p.phi);
    let mut delta_tilde = target + pv.varpi * cp * cp;
    let mut err = f64::INFINITY;
    for it in 1..=MAX_INVERSION_ITERATIONS {
        let d = solve_displacements(p, pv, delta_tilde)?;
        let mc = renormalize(p, pv, &d, delta_tilde, temperature, include_upsilon)?;
        err = target - mc.delta_prime;
        if err.abs() < INVERSION_TOL {
            return Ok(Solved { delta_tilde, displacements: d, coeffs: mc, iterations: it });
        }
        delta_tilde += err;
    }
    Err(Error::NoConvergence { iterations: MAX_INVERSION_ITERATIONS, error: err.abs() })
}

/// Direct evaluation from the empty-cavity detuning δ_bare.
pub fn from_bare_detuning(
    p: &DerivedParams,
    pv: &PvConstants,
    delta_bare: f64,
    temperature: f64,
    include_upsilon: bool,
) -> Result<Solved> {
    let delta_tilde = delta_bare - p.delta_c - cavity_lamb_shift(p.kappa, temperature, p.omega0);
    let d = solve_displacements(p, pv, delta_tilde)?;
    let coeffs = renormalize(p, pv, &d, delta_tilde, temperature, include_upsilon)?;
    Ok(Solved { delta_tilde, displacements: d, coeffs, iterations: 0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::displacements::pv_constants;
    use crate::params::{derive_params, SystemConfig};

    #[test]
    fn chi_is_root_of_frequency_ratio() {
        let p = derive_params(&SystemConfig::reference()).unwrap();
        let pv = pv_constants(&p);
        let s = invert_detuning(&p, &pv, 2.0 * PI * 4e5, 300.0, false).unwrap();
        for j in 0..3 {
            let want = (p.trap_freqs[j] / s.coeffs.omega_prime[j]).sqrt();
            assert!((s.coeffs.chi[j] - want).abs() < 1e-15);
        }
        assert!((s.coeffs.delta_prime - 2.0 * PI * 4e5).abs() < INVERSION_TOL);
    }

    #[test]
    fn recoil_geometry_ratio() {
        let p = derive_params(&SystemConfig::reference()).unwrap();
        let pv = pv_constants(&p);
        let s = invert_detuning(&p, &pv, 2.0 * PI * 4e5, 300.0, false).unwrap();
        let g = s.coeffs.gamma_recoil_bare;
        let [x0, _, z0] = p.zero_point;
        assert!((g[2] * x0 * x0 / (g[0] * z0 * z0) - 7.0).abs() < 1e-12);
    }
}
