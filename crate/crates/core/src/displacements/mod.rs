//! Classical steady displacements of the cavity field and of the particle.
//!
//! The three force balances and the cavity amplitude equation are reduced to
//! one polynomial. All transverse forces share the factor
//!
//! ```text
//! F = G sinφ k_c Re α_c + (ω_c ε_c V / 2V_c) k_c sin2φ |α_c|²
//! ```
//!
//! so that β_x = x₀ sinΘ F / D_x and β_y = y₀ cosΘ F / D_y. Eliminating β_z and
//! α_c leaves a quintic in F (equivalently in β_y whenever cosΘ ≠ 0).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::consts::{EPS0, HBAR};
use crate::error::{Error, Result};
use crate::numerics::{pv_cubic_integral, pv_quintic_integral, Poly};
use crate::params::{sin_cos, DerivedParams};

use std::f64::consts::{PI, SQRT_2};

/// Closed-form constants from the traced-out free-field modes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PvConstants {
    /// ϖ, rad/s.
    pub varpi: f64,
    /// ϖ₂, rad/s.
    pub varpi2: f64,
    /// Dimensionless C0 of the incoherent cavity-COM rate.
    pub c0: f64,
    /// PV ∫₀^Kc k³/(k−k₀) dk, 1/m⁴.
    pub pv_cubic: f64,
    /// PV ∫₀^Kc k⁵/(k−k₀) dk, 1/m⁶.
    pub pv_quintic: f64,
    /// Whether the pole k₀ lies inside (0, K_c).
    pub pole_inside: bool,
}

/// PV constants for the given static parameters.
pub fn pv_constants(p: &DerivedParams) -> PvConstants {
    let k0 = p.k0;
    let kc = p.cutoff;
    let pv_cubic = pv_cubic_integral(k0, kc);
    let pv_quintic = pv_quintic_integral(k0, kc);
    let (ec, v) = (p.eps_c, p.volume);
    let varpi = ec * ec * v * v / (12.0 * PI * PI) * (p.omega_c / p.mode_volume) * pv_cubic;
    let lead = ec * v * p.field_amp / PI;
    let varpi2 = lead * lead * EPS0 / (30.0 * HBAR * k0 * k0) * pv_quintic;
    let z0 = p.zero_point[2];
    let c0 = ec * ec / (12.0 * PI)
        * (k0 * z0)
        * (v * k0.powi(3))
        * ((v / p.mode_volume) * EPS0 * v * p.field_amp.powi(2) / (2.0 * HBAR * p.omega_c)).sqrt();
    PvConstants { varpi, varpi2, c0, pv_cubic, pv_quintic, pole_inside: kc > k0 }
}

/// Relative residuals of the four steady-state equations.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Residuals {
    pub alpha: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Residuals {
    pub fn max(&self) -> f64 {
        self.alpha.max(self.x).max(self.y).max(self.z)
    }
}

/// One real root of the displacement polynomial with its full state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootState {
    /// Common transverse force factor F.
    pub force: f64,
    pub alpha_c: Complex64,
    pub beta: [f64; 3],
    pub residuals: Residuals,
}

/// How the physical root was picked among several real ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RootSelection {
    /// Only one real root.
    Unique,
    /// Followed continuously from zero power.
    Homotopy,
    /// Continuation was ambiguous; smallest |β_y| taken.
    Fallback,
}

/// Steady displacements.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Displacements {
    pub alpha_c: Complex64,
    pub beta: [f64; 3],
    pub photon_number: f64,
    /// 2 β_j r_j0, m.
    pub equilibrium_shift: [f64; 3],
    /// All real roots, ordered by β_y.
    pub roots: Vec<RootState>,
    pub root_selected: usize,
    pub selection: RootSelection,
    pub residuals: Residuals,
}

impl Displacements {
    /// β_y of every real root.
    pub fn real_roots_beta_y(&self) -> Vec<f64> {
        self.roots.iter().map(|r| r.beta[1]).collect()
    }

    /// The same solution set with another root selected.
    pub fn with_root(&self, idx: usize, p: &DerivedParams) -> Displacements {
        let r = self.roots[idx];
        Displacements {
            alpha_c: r.alpha_c,
            beta: r.beta,
            photon_number: r.alpha_c.norm_sqr(),
            equilibrium_shift: shifts(r.beta, p),
            roots: self.roots.clone(),
            root_selected: idx,
            selection: self.selection,
            residuals: r.residuals,
        }
    }

    /// All displacements zero.
    pub fn zero() -> Displacements {
        let root = RootState {
            force: 0.0,
            alpha_c: Complex64::new(0.0, 0.0),
            beta: [0.0; 3],
            residuals: Residuals::default(),
        };
        Displacements {
            alpha_c: root.alpha_c,
            beta: [0.0; 3],
            photon_number: 0.0,
            equilibrium_shift: [0.0; 3],
            roots: vec![root],
            root_selected: 0,
            selection: RootSelection::Unique,
            residuals: Residuals::default(),
        }
    }
}

fn shifts(beta: [f64; 3], p: &DerivedParams) -> [f64; 3] {
    [0, 1, 2].map(|j| 2.0 * beta[j] * p.zero_point[j])
}

/// Coefficients of the reduced steady-state system at fixed δ̃.
#[derive(Debug, Clone, Copy)]
struct Reduced {
    ax: f64,
    ay: f64,
    dz: f64,
    q0: f64,
    q1: f64,
    p0: f64,
    p1: f64,
    k: f64,
    z: f64,
    kappa: f64,
    gk: f64,
    wk: f64,
}

impl Reduced {
    fn new(p: &DerivedParams, pv: &PvConstants, delta_tilde: f64) -> Reduced {
        let (st, ct) = sin_cos(p.theta);
        let (sp, cp) = sin_cos(p.phi);
        let [x0, y0, z0] = p.zero_point;
        let [wx, wy, wz] = p.trap_freqs;
        let k0 = p.k0;
        let dx = wx - pv.varpi2 * (k0 * x0).powi(2);
        let dy = wy - 2.0 * pv.varpi2 * (k0 * y0).powi(2);
        let dz = wz - 2.0 * pv.varpi2 * (k0 * z0).powi(2);
        let ax = x0 * st / dx;
        let ay = y0 * ct / dy;
        let g = p.coupling_g;
        let ve = pv.varpi * p.eta;
        Reduced {
            ax,
            ay,
            dz,
            q0: delta_tilde - pv.varpi * cp * cp,
            q1: -2.0 * (p.g_cx * ax + p.g_cy * ay),
            p0: 0.5 * g * cp + ve * cp / SQRT_2,
            p1: g * sp * p.k_c * (x0 * st * ax + y0 * ct * ay),
            k: k0 * z0 * cp * (SQRT_2 * ve - g),
            z: k0 * z0 * cp * (g - 2.0 * ve),
            kappa: p.kappa,
            gk: g * sp * p.k_c,
            wk: p.cavity_shift_scale * p.k_c * 2.0 * sp * cp,
        }
    }

    /// p(F) = F E² − G sinφ k_c P (D_z Q + Z K) E − W k_c sin2φ P² ((D_z Q + Z K)² + κ² D_z²).
    fn polynomial(&self) -> Poly<f64> {
        let q = Poly::linear(self.q0, self.q1);
        let pp = Poly::linear(self.p0, self.p1);
        let n = &(&q * &q) + &Poly::constant(self.kappa * self.kappa);
        let e = &n.scale(self.dz) + &q.scale(self.z * self.k);
        let h = &q.scale(self.dz) + &Poly::constant(self.z * self.k);
        let s = Poly::linear(0.0, 1.0);
        let lhs = &s * &(&e * &e);
        let t1 = (&(&pp * &h) * &e).scale(self.gk);
        let h2 = &(&h * &h) + &Poly::constant((self.kappa * self.dz).powi(2));
        let t2 = (&(&pp * &pp) * &h2).scale(self.wk);
        &(&lhs - &t1) - &t2
    }

    /// (α_c, β) for a given force factor.
    fn state(&self, f: f64) -> Option<(Complex64, [f64; 3])> {
        let q = self.q0 + self.q1 * f;
        let pp = self.p0 + self.p1 * f;
        let e = self.dz * (q * q + self.kappa * self.kappa) + self.z * self.k * q;
        if e == 0.0 {
            return if pp == 0.0 {
                Some((Complex64::new(0.0, 0.0), [self.ax * f, self.ay * f, 0.0]))
            } else {
                None
            };
        }
        let alpha = pp * Complex64::new(self.dz * q + self.z * self.k, self.kappa * self.dz) / e;
        let bz = -self.z * pp * self.kappa / e;
        Some((alpha, [self.ax * f, self.ay * f, bz]))
    }
}

/// Residuals of the unreduced equations (cavity amplitude and three force
/// balances), each relative to its largest term.
pub fn residuals(
    p: &DerivedParams,
    pv: &PvConstants,
    delta_tilde: f64,
    alpha: Complex64,
    beta: [f64; 3],
) -> Residuals {
    let (st, ct) = sin_cos(p.theta);
    let (sp, cp) = sin_cos(p.phi);
    let [x0, y0, z0] = p.zero_point;
    let [wx, wy, wz] = p.trap_freqs;
    let [bx, by, bz] = beta;
    let (k0, kc, g) = (p.k0, p.k_c, p.coupling_g);
    let ve = pv.varpi * p.eta;
    let rel = |terms: &[f64]| {
        let sum: f64 = terms.iter().sum();
        let scale = terms.iter().fold(0.0_f64, |m, t| m.max(t.abs()));
        if scale == 0.0 {
            0.0
        } else {
            sum.abs() / scale
        }
    };

    let q = delta_tilde - pv.varpi * cp * cp - 2.0 * p.g_cx * bx - 2.0 * p.g_cy * by;
    let pp = 0.5 * g * cp + ve * cp / SQRT_2 + g * sp * (kc * x0 * bx * st + kc * y0 * by * ct);
    let kk = k0 * z0 * cp * (SQRT_2 * ve - g);
    let lhs = alpha * Complex64::new(q, -p.kappa);
    let rhs = Complex64::new(pp, kk * bz);
    let a_scale = [(alpha * q).norm(), alpha.norm() * p.kappa, pp.abs(), (kk * bz).abs()]
        .into_iter()
        .fold(0.0_f64, f64::max);
    let r_alpha = if a_scale == 0.0 { 0.0 } else { (lhs - rhs).norm() / a_scale };

    let n2 = alpha.norm_sqr();
    let r_x = rel(&[
        wx * bx,
        -sp * st * kc * x0 * g * alpha.re,
        -pv.varpi2 * (k0 * x0).powi(2) * bx,
        -p.g_cx * n2,
    ]);
    let r_y = rel(&[
        wy * by,
        -sp * ct * kc * y0 * g * alpha.re,
        -2.0 * pv.varpi2 * (k0 * y0).powi(2) * by,
        -p.g_cy * n2,
    ]);
    let r_z = rel(&[
        wz * bz,
        cp * k0 * z0 * g * alpha.im,
        -2.0 * pv.varpi2 * (k0 * z0).powi(2) * bz,
        -2.0 * ve * k0 * z0 * cp * alpha.im,
    ]);
    Residuals { alpha: r_alpha, x: r_x, y: r_y, z: r_z }
}

/// Roots whose unreduced residuals exceed this are spurious.
const ACCEPT_RESIDUAL: f64 = 1e-6;
/// Relative imaginary-part threshold for a real root.
const REAL_TOL: f64 = 1e-8;

fn real_states(p: &DerivedParams, pv: &PvConstants, delta_tilde: f64) -> Vec<RootState> {
    let red = Reduced::new(p, pv, delta_tilde);
    let poly = red.polynomial();
    let mut out: Vec<RootState> = poly
        .real_roots(REAL_TOL)
        .into_iter()
        .filter_map(|f| {
            let (alpha, beta) = red.state(f)?;
            let residuals = residuals(p, pv, delta_tilde, alpha, beta);
            (residuals.max() < ACCEPT_RESIDUAL).then_some(RootState {
                force: f,
                alpha_c: alpha,
                beta,
                residuals,
            })
        })
        .collect();
    if poly.degree() == 0 && poly.coeffs.iter().all(|c| *c == 0.0) {
        // Fully decoupled: every force vanishes identically.
        out.clear();
    }
    out.sort_by(|a, b| a.beta[1].partial_cmp(&b.beta[1]).unwrap().then(a.force.total_cmp(&b.force)));
    out.dedup_by(|a, b| (a.force - b.force).abs() <= 1e-12 * a.force.abs().max(b.force.abs()));
    out
}

/// Static parameters and PV constants at tweezer power scaled by `f`.
pub fn scale_power(p: &DerivedParams, pv: &PvConstants, f: f64) -> (DerivedParams, PvConstants) {
    let sq = f.sqrt();
    let qr = f.powf(-0.25);
    let mut p2 = p.clone();
    p2.field_amp *= sq;
    p2.trap_freqs = p.trap_freqs.map(|w| w * sq);
    p2.zero_point = p.zero_point.map(|r| r * qr);
    p2.coupling_g *= sq;
    p2.g_cx *= qr;
    p2.g_cy *= qr;
    p2.eta *= sq;
    let mut pv2 = *pv;
    pv2.varpi2 *= f;
    pv2.c0 *= f.powf(0.25);
    (p2, pv2)
}

/// Homotopy steps in tweezer power used to pick among several real roots.
pub const HOMOTOPY_STEPS: usize = 10;

/// Solves the steady-state displacement problem at fixed δ̃.
pub fn solve_displacements(
    p: &DerivedParams,
    pv: &PvConstants,
    delta_tilde: f64,
) -> Result<Displacements> {
    if p.coupling_g == 0.0 && p.g_cx == 0.0 && p.g_cy == 0.0 && p.eta == 0.0 {
        return Ok(Displacements::zero());
    }
    let roots = real_states(p, pv, delta_tilde);
    if roots.is_empty() {
        return Err(Error::NoRealRoot);
    }
    let (idx, selection) = if roots.len() == 1 {
        (0, RootSelection::Unique)
    } else {
        match follow_from_zero_power(p, pv, delta_tilde, &roots) {
            Some(i) => (i, RootSelection::Homotopy),
            None => (smallest_beta_y(&roots), RootSelection::Fallback),
        }
    };
    let r = roots[idx];
    Ok(Displacements {
        alpha_c: r.alpha_c,
        beta: r.beta,
        photon_number: r.alpha_c.norm_sqr(),
        equilibrium_shift: shifts(r.beta, p),
        roots,
        root_selected: idx,
        selection,
        residuals: r.residuals,
    })
}

fn smallest_beta_y(roots: &[RootState]) -> usize {
    let key = |r: &RootState| (r.beta[1].abs(), r.beta.iter().map(|b| b * b).sum::<f64>());
    (0..roots.len())
        .min_by(|&a, &b| key(&roots[a]).partial_cmp(&key(&roots[b])).unwrap())
        .unwrap()
}

fn distance(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

// Tracks the root connected to β = 0 while ramping the tweezer power. Returns
// `None` when a step has no root or the nearest two are not well separated.
fn follow_from_zero_power(
    p: &DerivedParams,
    pv: &PvConstants,
    delta_tilde: f64,
    final_roots: &[RootState],
) -> Option<usize> {
    let mut prev = [0.0; 3];
    for step in 1..=HOMOTOPY_STEPS {
        let f = step as f64 / HOMOTOPY_STEPS as f64;
        let cands = if step == HOMOTOPY_STEPS {
            final_roots.to_vec()
        } else {
            let (ps, pvs) = scale_power(p, pv, f);
            real_states(&ps, &pvs, delta_tilde)
        };
        if cands.is_empty() {
            return None;
        }
        let mut d: Vec<(f64, usize)> =
            cands.iter().enumerate().map(|(i, c)| (distance(&c.beta, &prev), i)).collect();
        d.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        if d.len() > 1 && d[1].0 < 2.0 * d[0].0 {
            return None;
        }
        prev = cands[d[0].1].beta;
        if step == HOMOTOPY_STEPS {
            return Some(d[0].1);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{derive_params, SystemConfig};

    #[test]
    fn scale_power_matches_rederivation() {
        let cfg = SystemConfig::reference();
        let p = derive_params(&cfg).unwrap();
        let pv = pv_constants(&p);
        let (p2, pv2) = scale_power(&p, &pv, 0.3);
        let q = derive_params(&cfg.with_power_scaled(0.3)).unwrap();
        let qv = pv_constants(&q);
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs());
        assert!(close(p2.coupling_g, q.coupling_g));
        assert!(close(p2.g_cx, q.g_cx));
        assert!(close(p2.eta, q.eta));
        for j in 0..3 {
            assert!(close(p2.trap_freqs[j], q.trap_freqs[j]));
            assert!(close(p2.zero_point[j], q.zero_point[j]));
        }
        assert!(close(pv2.varpi2, qv.varpi2));
        assert!(close(pv2.c0, qv.c0));
    }

    #[test]
    fn polynomial_is_quintic() {
        let p = derive_params(&SystemConfig::reference()).unwrap();
        let pv = pv_constants(&p);
        let red = Reduced::new(&p, &pv, 2.0 * PI * 4e5);
        assert_eq!(red.polynomial().degree(), 5);
    }

    #[test]
    fn polynomial_roots_solve_the_fixed_point() {
        let p = derive_params(&SystemConfig::reference()).unwrap();
        let pv = pv_constants(&p);
        let d = solve_displacements(&p, &pv, 2.0 * PI * 4e5).unwrap();
        assert!(d.residuals.max() < 1e-9, "{:?}", d.residuals);
    }
}
