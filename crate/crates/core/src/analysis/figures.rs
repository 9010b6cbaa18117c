//! Drivers producing the data behind each figure, with programmatic checks
//! of the qualitative features the curves must show.
//!
//! Every driver works from [`SystemConfig::reference`] and only overrides the
//! parameters named in its preset.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::sweep::{
    evaluate_point, gamma_minimizing_power, ground_state_scan, lin_grid, log_grid, static_rates,
    Observable, SweepResult, SweepRow, SweepSpec,
};
use super::table::Table;
use crate::consts::{HBAR, K_B, TWO_PI};
use crate::dynamics::{evolve_at, steady_state, temperatures, thermal_state};
use crate::error::{Error, Result};
use crate::model::{Model, RootStability};
use crate::params::{Detuning, DisplacementNoise, SystemConfig};
use crate::spectra::{default_grid, psd};
use crate::units::{mbar_to_pa, to_hz};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FigureName {
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Fig8,
    Fig9,
}

impl FigureName {
    pub const ALL: [FigureName; 8] = [
        FigureName::Fig2,
        FigureName::Fig3,
        FigureName::Fig4,
        FigureName::Fig5,
        FigureName::Fig6,
        FigureName::Fig7,
        FigureName::Fig8,
        FigureName::Fig9,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FigureName::Fig2 => "fig2",
            FigureName::Fig3 => "fig3",
            FigureName::Fig4 => "fig4",
            FigureName::Fig5 => "fig5",
            FigureName::Fig6 => "fig6",
            FigureName::Fig7 => "fig7",
            FigureName::Fig8 => "fig8",
            FigureName::Fig9 => "fig9",
        }
    }

    pub fn parse(s: &str) -> Result<FigureName> {
        FigureName::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown figure `{s}` (fig2 to fig9)")))
    }
}

/// One asserted feature of a figure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShapeCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl ShapeCheck {
    fn new(name: &str, passed: bool, detail: String) -> ShapeCheck {
        ShapeCheck { name: name.to_string(), passed, detail }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FigureData {
    pub name: FigureName,
    /// `(file stem, table)`; the CLI writes `<stem>.csv`.
    pub tables: Vec<(String, Table)>,
    pub checks: Vec<ShapeCheck>,
    /// Derived preset values, e.g. Γ-minimizing powers.
    pub presets: Vec<(String, f64)>,
}

impl FigureData {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub fn figure_driver(name: FigureName) -> Result<FigureData> {
    match name {
        FigureName::Fig2 => fig2(),
        FigureName::Fig3 => fig3(),
        FigureName::Fig4 => fig4(),
        FigureName::Fig5 => fig5(),
        FigureName::Fig6 => fig6(),
        FigureName::Fig7 => fig7(),
        FigureName::Fig8 => fig8(),
        FigureName::Fig9 => fig9(),
    }
}

const AXES: [&str; 3] = ["x", "y", "z"];
const PHIS: [f64; 5] = [0.0, PI / 8.0, PI / 4.0, 3.0 * PI / 8.0, PI / 2.0];

fn nan_max(v: &[f64]) -> f64 {
    v.iter().copied().filter(|x| x.is_finite()).fold(0.0, |m, x| m.max(x.abs()))
}

fn rows_parallel(cfgs: Vec<SystemConfig>, want_fwhm: bool) -> Vec<SweepRow> {
    cfgs.into_par_iter().map(|c| evaluate_point(&c, Vec::new(), want_fwhm)).collect()
}

/// Equilibrium displacements and couplings versus φ and Θ.
pub fn fig2() -> Result<FigureData> {
    let base = SystemConfig::reference();
    let cols = [
        ("beta_x", "1"),
        ("beta_y", "1"),
        ("beta_z", "1"),
        ("photon_number", "1"),
        ("g_x", "Hz"),
        ("g_y", "Hz"),
        ("g_z", "Hz"),
    ];
    let mut out = FigureData { name: FigureName::Fig2, tables: vec![], checks: vec![], presets: vec![] };
    for (var, grid) in [("phi", lin_grid(0.0, PI / 2.0, 41)), ("theta", lin_grid(0.0, PI / 2.0, 41))] {
        let cfgs: Vec<SystemConfig> = grid
            .iter()
            .map(|&v| {
                let mut c = base.clone();
                if var == "phi" {
                    c.phi = v;
                } else {
                    c.theta = v;
                }
                c
            })
            .collect();
        let rows = rows_parallel(cfgs, false);
        let mut t = Table::new(&[&[(var, "rad")][..], &cols[..]].concat());
        t.comment(format!(
            "Displacements versus {var}; Θ = 10° for the φ scan, φ = π/4 for the Θ scan; δ′ = 400 kHz"
        ));
        for (v, r) in grid.iter().zip(&rows) {
            let mut row = vec![*v];
            row.extend(r.beta);
            row.push(r.photon_number);
            row.extend(r.coupling.map(to_hz));
            t.push_with_note(row, r.error.clone().unwrap_or_default());
        }
        let scale = rows.iter().map(|r| nan_max(&r.beta)).fold(0.0, f64::max);
        let last = &rows[rows.len() - 1];
        let vanish = last.error.is_none() && nan_max(&last.beta) <= 1e-9 * scale;
        out.checks.push(ShapeCheck::new(
            &format!("displacements vanish at {var} = π/2"),
            vanish && scale > 0.0,
            format!("max |β| at π/2 = {:e}, max over scan = {scale:e}", nan_max(&last.beta)),
        ));
        out.tables.push((format!("fig2_{var}"), t));
    }
    Ok(out)
}

fn pressure_grid() -> Vec<f64> {
    log_grid(1e-8, 10.0, 37)
}

/// Steady temperatures versus pressure for five cavity positions.
pub fn fig3() -> Result<FigureData> {
    let base = SystemConfig::reference();
    let pressures = pressure_grid();
    let mut t = Table::new(&[
        ("phi", "rad"),
        ("pressure", "mbar"),
        ("T_x", "K"),
        ("T_y", "K"),
        ("T_z", "K"),
    ]);
    t.comment("Steady temperatures; δ′ = 400 kHz, Θ = 10°");
    let mut by_phi = Vec::new();
    for &phi in &PHIS {
        let cfgs = pressures
            .iter()
            .map(|&p| SystemConfig { phi, gas_pressure: mbar_to_pa(p), ..base.clone() })
            .collect();
        let rows = rows_parallel(cfgs, false);
        for (p, r) in pressures.iter().zip(&rows) {
            let mut v = vec![phi, *p];
            v.extend(r.temperatures);
            t.push_with_note(v, r.error.clone().unwrap_or_default());
        }
        by_phi.push(rows);
    }
    // lowest pressure point of every curve
    let low: Vec<[f64; 3]> = by_phi.iter().map(|rows| rows[0].temperatures).collect();
    let argmin = |j: usize| {
        (0..PHIS.len())
            .filter(|&i| low[i][j].is_finite())
            .min_by(|&a, &b| low[a][j].total_cmp(&low[b][j]))
    };
    let mut checks = vec![
        ShapeCheck::new(
            "T_z lowest at φ = 0",
            argmin(2) == Some(0),
            format!("T_z at lowest pressure per φ: {:?}", low.iter().map(|t| t[2]).collect::<Vec<_>>()),
        ),
        ShapeCheck::new(
            "T_x, T_y lowest at φ = π/2",
            argmin(0) == Some(4) && argmin(1) == Some(4),
            format!(
                "T_x {:?}, T_y {:?}",
                low.iter().map(|t| t[0]).collect::<Vec<_>>(),
                low.iter().map(|t| t[1]).collect::<Vec<_>>()
            ),
        ),
    ];
    // At the best positions the low-pressure end has d ln T / d ln P < 0.1.
    let best = [(0usize, 4usize), (1, 4), (2, 0)];
    let slope = |j: usize, i: usize| {
        let (a, b) = (by_phi[i][0].temperatures[j], by_phi[i][1].temperatures[j]);
        (b / a).ln() / (pressures[1] / pressures[0]).ln()
    };
    let slopes: Vec<f64> = best.iter().map(|&(j, i)| slope(j, i)).collect();
    checks.push(ShapeCheck::new(
        "T(P) saturates at low pressure",
        slopes.iter().all(|s| s.is_finite() && s.abs() < 0.1),
        format!("low-end slopes d ln T / d ln P (x, y, z): {slopes:?}"),
    ));
    Ok(FigureData { name: FigureName::Fig3, tables: vec![("fig3".into(), t)], checks, presets: vec![] })
}

/// Motional PSD at φ = π/4 and main-peak FWHM versus pressure.
pub fn fig4() -> Result<FigureData> {
    let cfg = SystemConfig::reference();
    let m = Model::build(&cfg)?;
    let ss = m.steady_state()?;
    let grid = default_grid(&m.drift);
    let mut spec_t = Table::new(&[("frequency", "Hz"), ("S_x", "m2/Hz"), ("S_y", "m2/Hz"), ("S_z", "m2/Hz")]);
    spec_t.comment("Two-sided displacement PSD, P = 3e-3 mbar, φ = π/4, Θ = 10°");
    let spectra: Vec<_> = (0..3)
        .map(|j| psd(&m.drift, &ss, j, m.params.zero_point[j], &grid))
        .collect::<Result<_>>()?;
    for (k, &w) in grid.iter().enumerate() {
        spec_t.push(vec![to_hz(w), spectra[0].s[k] * TWO_PI, spectra[1].s[k] * TWO_PI, spectra[2].s[k] * TWO_PI]);
    }
    let mut poles = Table::new(&[
        ("axis", "0=x,1=y,2=z"),
        ("pole_re", "Hz"),
        ("pole_im", "Hz"),
        ("weight_re", "m2"),
        ("weight_im", "m2"),
    ]);
    poles.comment("Lorentzian terms: S(ω) = Σ 2 Re[−W/(λ + iω)], ω and λ in rad/s");
    for (j, sr) in spectra.iter().enumerate() {
        for t in &sr.terms {
            poles.push(vec![j as f64, to_hz(t.pole.re), to_hz(t.pole.im), t.weight.re, t.weight.im]);
        }
    }
    let near = (0..3).all(|j| {
        let w = m.coeffs.omega_prime[j];
        (spectra[j].peak_center - w).abs() < 0.3 * w
    });
    let mut checks = vec![ShapeCheck::new(
        "main peaks near Ω_j′",
        near,
        format!(
            "centres {:?} Hz, Ω′ {:?} Hz",
            spectra.iter().map(|s| to_hz(s.peak_center)).collect::<Vec<_>>(),
            m.coeffs.omega_prime.map(to_hz)
        ),
    )];

    let pressures = pressure_grid();
    let cfgs = pressures
        .iter()
        .map(|&p| SystemConfig { gas_pressure: mbar_to_pa(p), ..cfg.clone() })
        .collect();
    let rows = rows_parallel(cfgs, true);
    let mut fw = Table::new(&[("pressure", "mbar"), ("fwhm_x", "Hz"), ("fwhm_y", "Hz"), ("fwhm_z", "Hz")]);
    fw.comment("FWHM of the main PSD peaks, φ = π/4, Θ = 10°");
    for (p, r) in pressures.iter().zip(&rows) {
        let mut v = vec![*p];
        v.extend(r.fwhm.map(to_hz));
        fw.push_with_note(v, r.error.clone().unwrap_or_default());
    }
    let plateau = (0..3).all(|j| {
        let (a, b) = (rows[0].fwhm[j], rows[4].fwhm[j]);
        a.is_finite() && (b / a - 1.0).abs() < 0.05
    });
    checks.push(ShapeCheck::new(
        "FWHM plateau at low pressure",
        plateau,
        format!("fwhm at {:e} mbar: {:?} Hz", pressures[0], rows[0].fwhm.map(to_hz)),
    ));
    let last = rows.len() - 1;
    let grows = (0..3).all(|j| rows[last].fwhm[j] > rows[0].fwhm[j]);
    checks.push(ShapeCheck::new(
        "gas damping widens the peaks at high pressure",
        grows,
        format!("fwhm at {:e} mbar: {:?} Hz", pressures[last], rows[last].fwhm.map(to_hz)),
    ));
    Ok(FigureData {
        name: FigureName::Fig4,
        tables: vec![("fig4_psd".into(), spec_t), ("fig4_poles".into(), poles), ("fig4_fwhm".into(), fw)],
        checks,
        presets: vec![],
    })
}

/// Cooling from room temperature at three positions.
pub fn fig5() -> Result<FigureData> {
    let base = SystemConfig::reference();
    let times = lin_grid(0.0, 0.2, 401);
    let mut t = Table::new(&[("phi", "rad"), ("time", "s"), ("T_x", "K"), ("T_y", "K"), ("T_z", "K")]);
    t.comment("Thermal state at 300 K evolved at P = 3e-3 mbar, δ′ = 400 kHz, Θ = 10°");
    let mut approach = true;
    let mut detail = String::new();
    for phi in [0.0, PI / 4.0, PI / 2.0] {
        let m = Model::build(&SystemConfig { phi, ..base.clone() })?;
        let w = m.coeffs.omega_prime;
        let s0 = thermal_state::<f64>(300.0, w);
        let traj = evolve_at(&m.drift, &s0, &times)?;
        let t_ss = temperatures(&m.steady_state()?, w);
        for s in &traj {
            let mut v = vec![phi, s.time];
            v.extend(temperatures(s, w));
            t.push(v);
        }
        let t_end = temperatures(traj.last().unwrap(), w);
        for j in 0..3 {
            if (t_end[j] - t_ss[j]).abs() >= (300.0 - t_ss[j]).abs() {
                approach = false;
                detail.push_str(&format!("φ={phi:.3} axis {}: T_end {:e}, T_ss {:e}; ", AXES[j], t_end[j], t_ss[j]));
            }
        }
    }
    Ok(FigureData {
        name: FigureName::Fig5,
        tables: vec![("fig5".into(), t)],
        checks: vec![ShapeCheck::new("every axis relaxes toward its steady state", approach, detail)],
        presets: vec![],
    })
}

/// Result of the reheating comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reheating {
    pub times: Vec<f64>,
    /// Numerical T_z at `times`.
    pub numeric: Vec<f64>,
    /// `T_ss + (T₀ − T_ss) e^{−γt}`.
    pub closed_form: Vec<f64>,
    pub max_rel_error: f64,
    pub gamma: f64,
    pub t0: f64,
    pub t_ss: f64,
}

/// Reheating of the z motion at δ′ = 2π×20 MHz from the cooled temperature
/// `t0`, sampled at multiples of half the damped oscillation period, where
/// the 2Ω micromotion of ⟨b†b⟩ returns to its initial phase.
pub fn reheating(phi: f64, t0: f64, periods: usize, samples_per_decay: usize) -> Result<Reheating> {
    let cfg = SystemConfig { phi, detuning: Detuning::Target(TWO_PI * 20e6), ..SystemConfig::reference() };
    let m = Model::build(&cfg)?;
    let w = m.coeffs.omega_prime;
    let gamma = m.noise.gamma;
    let wd = (w[2] * w[2] - gamma * gamma / 4.0).sqrt();
    let half = PI / wd;
    let t_decay = 1.0 / gamma;
    let total = periods as f64 * t_decay;
    let n_half = (total / half).floor() as usize;
    let stride = (n_half / samples_per_decay / periods).max(1);
    let times: Vec<f64> = (0..=n_half).step_by(stride).map(|k| k as f64 * half).collect();
    let s0 = thermal_state::<f64>(t0, w);
    // Bose occupation of the initial state, expressed on the ħΩn/k_B scale
    let t0 = temperatures(&s0, w)[2];
    let traj = evolve_at(&m.drift, &s0, &times)?;
    let t_ss = temperatures(&steady_state(&m.drift)?, w)[2];
    let numeric: Vec<f64> = traj.iter().map(|s| temperatures(s, w)[2]).collect();
    let closed_form: Vec<f64> =
        times.iter().map(|&t| t_ss + (t0 - t_ss) * (-gamma * t).exp()).collect();
    let max_rel_error = numeric
        .iter()
        .zip(&closed_form)
        .map(|(a, b)| ((a - b) / b).abs())
        .fold(0.0, f64::max);
    Ok(Reheating { times, numeric, closed_form, max_rel_error, gamma, t0, t_ss })
}

/// Cooled z temperature at the anti-node, the reheating start point.
pub fn cooled_z_temperature() -> Result<f64> {
    let m = Model::build(&SystemConfig { phi: 0.0, ..SystemConfig::reference() })?;
    Ok(temperatures(&m.steady_state()?, m.coeffs.omega_prime)[2])
}

pub fn fig6() -> Result<FigureData> {
    let t0 = cooled_z_temperature()?;
    let r = reheating(PI / 2.0, t0, 3, 100)?;
    let mut t = Table::new(&[("time", "s"), ("T_z", "K"), ("T_z_closed_form", "K")]);
    t.comment(format!(
        "Reheating at δ′ = 20 MHz, P = 3e-3 mbar, φ = π/2, from T0 = {:e} K; γ = {:e} Hz",
        t0,
        to_hz(r.gamma)
    ));
    for k in 0..r.times.len() {
        t.push(vec![r.times[k], r.numeric[k], r.closed_form[k]]);
    }
    let mono = r.numeric.windows(2).all(|w| w[1] >= w[0]);
    Ok(FigureData {
        name: FigureName::Fig6,
        tables: vec![("fig6".into(), t)],
        checks: vec![
            ShapeCheck::new(
                "exponential reheating at rate γ",
                r.max_rel_error < 1e-6,
                format!("max relative deviation {:e}", r.max_rel_error),
            ),
            ShapeCheck::new("temperature rises monotonically", mono, String::new()),
        ],
        presets: vec![("T0_K".into(), t0), ("gamma_Hz".into(), to_hz(r.gamma))],
    })
}

/// Temperature of axis `j` with the cavity coupling removed: `2Γ_j/γ − 1/2`
/// phonons.
pub fn uncoupled_temperature(cfg: &SystemConfig, j: usize) -> Result<f64> {
    let (mc, nr) = static_rates(cfg)?;
    let n = 2.0 * nr.gamma_total[j] / nr.gamma - 0.5;
    Ok(HBAR * mc.omega_prime[j] * n / K_B)
}

/// Steady temperatures versus detuning, and versus tweezer power.
pub fn fig7() -> Result<FigureData> {
    let base = SystemConfig::reference();
    let detunings = log_grid(TWO_PI * 50e3, TWO_PI * 20e6, 49);
    let mut t = Table::new(&[("phi", "rad"), ("detuning", "Hz"), ("T_x", "K"), ("T_y", "K"), ("T_z", "K")]);
    t.comment("Steady temperatures, P_t = 0.5 W, P = 3e-3 mbar, Θ = 10°");
    let mut curves = Vec::new();
    for phi in [0.0, PI / 4.0, PI / 2.0] {
        let cfgs = detunings
            .iter()
            .map(|&d| SystemConfig { phi, detuning: Detuning::Target(d), ..base.clone() })
            .collect();
        let rows = rows_parallel(cfgs, false);
        for (d, r) in detunings.iter().zip(&rows) {
            let mut v = vec![phi, to_hz(*d)];
            v.extend(r.temperatures);
            t.push_with_note(v, r.error.clone().unwrap_or_default());
        }
        curves.push(rows);
    }
    // best positions: x, y at the node, z at the anti-node
    let mut checks = Vec::new();
    for (j, ci) in [(0usize, 2usize), (1, 2), (2, 0)] {
        let phi = [0.0, PI / 4.0, PI / 2.0][ci];
        let t_free = uncoupled_temperature(&SystemConfig { phi, ..base.clone() }, j)?;
        let kappa = curves[ci][0].kappa_prime;
        let ratio: Vec<f64> = curves[ci].iter().map(|r| r.temperatures[j] / t_free).collect();
        let best = ratio.iter().copied().filter(|x| x.is_finite()).fold(f64::INFINITY, f64::min);
        let far: Vec<f64> = detunings
            .iter()
            .zip(&ratio)
            .filter(|(d, _)| **d >= 10.0 * kappa)
            .map(|(_, r)| *r)
            .collect();
        let gone = !far.is_empty() && far.iter().all(|r| *r > 0.5);
        checks.push(ShapeCheck::new(
            &format!("cooling along {} disappears by δ′ ≈ 10κ′", AXES[j]),
            best < 0.1 && gone,
            format!("best T/T_free = {best:e}, beyond 10κ′: min {:e}", far.iter().copied().fold(f64::INFINITY, f64::min)),
        ));
    }

    let powers = lin_grid(0.05, 1.5, 30);
    let mut tp = Table::new(&[("tweezer_power", "W"), ("T_x", "K"), ("T_y", "K"), ("T_z", "K")]);
    tp.comment("Steady temperatures at the best position (φ = π/2 for x and y, φ = 0 for z), δ′ = 400 kHz");
    let node = rows_parallel(
        powers.iter().map(|&p| SystemConfig { tweezer_power: p, phi: PI / 2.0, ..base.clone() }).collect(),
        false,
    );
    let anti = rows_parallel(
        powers.iter().map(|&p| SystemConfig { tweezer_power: p, phi: 0.0, ..base.clone() }).collect(),
        false,
    );
    for k in 0..powers.len() {
        let note = node[k].error.clone().or(anti[k].error.clone()).unwrap_or_default();
        tp.push_with_note(
            vec![powers[k], node[k].temperatures[0], node[k].temperatures[1], anti[k].temperatures[2]],
            note,
        );
    }
    Ok(FigureData {
        name: FigureName::Fig7,
        tables: vec![("fig7_detuning".into(), t), ("fig7_power".into(), tp)],
        checks,
        presets: vec![],
    })
}

/// Axis-optimal configuration of the ground-state study: P = 1e-9 mbar,
/// displacement PSD `psd` (m²/Hz) on all axes.
pub fn ground_state_preset(axis: usize, psd: f64) -> SystemConfig {
    let (theta, phi) = match axis {
        0 => (PI / 4.0, PI / 2.0),
        1 => (0.0, PI / 2.0),
        _ => (0.0, 0.0),
    };
    SystemConfig {
        theta,
        phi,
        gas_pressure: mbar_to_pa(1e-9),
        displacement_noise: DisplacementNoise::Psd([psd; 3]),
        ..SystemConfig::reference()
    }
}

/// κ scan grid of the ground-state figures, rad/s.
pub fn kappa_grid() -> Vec<f64> {
    log_grid(TWO_PI * 100.0, TWO_PI * 1e6, 61)
}

/// Outcome of one κ′ scan along one axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KappaScan {
    pub axis: usize,
    pub result: SweepResult,
    pub min_occupation: f64,
    /// κ′/|g_j′| at the minimum.
    pub kappa_over_g: f64,
    /// 2Γ_j/|g_j′| at the minimum.
    pub floor: f64,
    /// The minimum is interior and both scan ends lie higher.
    pub u_shaped: bool,
    pub uncertain_points: usize,
}

pub fn kappa_scan(cfg: &SystemConfig, axis: usize) -> Result<KappaScan> {
    let spec = SweepSpec {
        varied: vec![("cavity_halfwidth".into(), kappa_grid())],
        fixed: cfg.clone(),
        observables: vec![Observable::Occupations, Observable::Temperatures, Observable::Stability],
        resonant_axis: Some(axis),
    };
    let result = ground_state_scan(&spec)?;
    let (i, n) = result.minima()[axis].ok_or(Error::Unstable { re: 0.0, im: 0.0 })?;
    let r = &result.rows[i];
    let stable: Vec<f64> = result
        .rows
        .iter()
        .filter(|r| r.is_stable())
        .map(|r| r.occupations[axis])
        .collect();
    let u_shaped = stable.len() > 2
        && stable.first().unwrap() > &n
        && stable.last().unwrap() > &n
        && i > 0
        && i + 1 < result.rows.len();
    let uncertain_points =
        result.rows.iter().filter(|r| r.stability == Some(RootStability::Uncertain)).count();
    Ok(KappaScan {
        axis,
        min_occupation: n,
        kappa_over_g: r.kappa_prime / r.coupling[axis],
        floor: 2.0 * r.gamma_total[axis] / r.coupling[axis],
        u_shaped,
        uncertain_points,
        result,
    })
}

/// Settings of the three ground-state scans at the lowest displacement noise.
pub fn fig8_presets() -> Result<[SystemConfig; 3]> {
    let mut out = [0, 1, 2].map(|j| ground_state_preset(j, 1e-32));
    for (j, cfg) in out.iter_mut().enumerate().take(2) {
        cfg.tweezer_power = gamma_minimizing_power(cfg, j, 1e-3, 10.0)?;
    }
    out[2].tweezer_power = 3.0;
    out[2].phi = PI / 3.0;
    Ok(out)
}

/// Rates versus power and occupation versus cavity linewidth.
pub fn fig8() -> Result<FigureData> {
    let root_psds = [1e-16, 1e-14, 1e-12];
    let powers = log_grid(1e-2, 10.0, 31);
    let mut rates = Table::new(&[
        ("axis", "0=x,1=y,2=z"),
        ("sqrt_psd", "m/sqrt(Hz)"),
        ("tweezer_power", "W"),
        ("Gamma_r", "Hz"),
        ("Gamma_p", "Hz"),
        ("Gamma_d", "Hz"),
        ("Gamma", "Hz"),
        ("Omega_prime", "Hz"),
        ("g_abs", "Hz"),
    ]);
    rates.comment("Heating rates and couplings at P = 1e-9 mbar under axis-optimal {δ′, Θ, φ}");
    for j in 0..3 {
        for &sq in &root_psds {
            let cfgs: Vec<SystemConfig> = powers
                .iter()
                .map(|&p| {
                    let mut c = ground_state_preset(j, sq * sq);
                    c.tweezer_power = p;
                    c
                })
                .collect();
            let rows = rows_parallel(cfgs.clone(), false);
            for ((p, c), r) in powers.iter().zip(&cfgs).zip(&rows) {
                let (_, nr) = static_rates(c)?;
                rates.push_with_note(
                    vec![
                        j as f64,
                        sq,
                        *p,
                        to_hz(nr.gamma_r[j]),
                        to_hz(nr.gamma_p[j]),
                        to_hz(nr.gamma_d[j]),
                        to_hz(nr.gamma_total[j]),
                        to_hz(r.omega_prime[j]),
                        to_hz(r.coupling[j]),
                    ],
                    r.error.clone().unwrap_or_default(),
                );
            }
        }
    }

    let presets = fig8_presets()?;
    let mut scans_t = Table::new(&[
        ("axis", "0=x,1=y,2=z"),
        ("sqrt_psd", "m/sqrt(Hz)"),
        ("kappa_prime", "Hz"),
        ("n", "1"),
        ("stability", "1=stable,0=unstable,0.5=uncertain"),
        ("kappa_over_g", "1"),
    ]);
    scans_t.comment("Steady occupation of the cooled axis versus κ′; δ′ = Ω_j′");
    let mut checks = Vec::new();
    let mut preset_out = Vec::new();
    for (j, base) in presets.iter().enumerate() {
        preset_out.push((format!("tweezer_power_{}_W", AXES[j]), base.tweezer_power));
        let psds: &[f64] = if j < 2 { &root_psds } else { &root_psds[..1] };
        for &sq in psds {
            let cfg = SystemConfig { displacement_noise: DisplacementNoise::Psd([sq * sq; 3]), ..base.clone() };
            let scan = kappa_scan(&cfg, j)?;
            for r in &scan.result.rows {
                let st = match r.stability {
                    Some(RootStability::Stable) => 1.0,
                    Some(RootStability::Uncertain) => 0.5,
                    Some(RootStability::Unstable) => 0.0,
                    None => f64::NAN,
                };
                let note = match (&r.error, r.stability) {
                    (Some(e), _) => e.clone(),
                    (None, Some(RootStability::Uncertain)) => "AmbiguousRoot".into(),
                    _ => String::new(),
                };
                scans_t.push_with_note(
                    vec![
                        j as f64,
                        sq,
                        to_hz(r.kappa_prime),
                        r.occupations[j],
                        st,
                        r.kappa_prime / r.coupling[j],
                    ],
                    note,
                );
            }
            if sq == root_psds[0] {
                preset_out.push((format!("min_n_{}", AXES[j]), scan.min_occupation));
                preset_out.push((format!("kappa_over_g_{}", AXES[j]), scan.kappa_over_g));
                preset_out.push((format!("floor_{}", AXES[j]), scan.floor));
                checks.push(ShapeCheck::new(
                    &format!("U-shaped κ′ scan along {} with minimum near κ′ ≈ |g′|", AXES[j]),
                    scan.u_shaped && (0.3..=3.0).contains(&scan.kappa_over_g),
                    format!("min n = {:.4} at κ′/|g′| = {:.3}", scan.min_occupation, scan.kappa_over_g),
                ));
            }
        }
    }
    Ok(FigureData {
        name: FigureName::Fig8,
        tables: vec![("fig8_rates".into(), rates), ("fig8_kappa".into(), scans_t)],
        checks,
        presets: preset_out,
    })
}

/// Simultaneous cooling of all three axes.
pub fn fig9() -> Result<FigureData> {
    let base = SystemConfig {
        theta: PI / 4.0,
        gas_pressure: mbar_to_pa(1e-9),
        displacement_noise: DisplacementNoise::Psd([1e-32; 3]),
        ..SystemConfig::reference()
    };
    let panels = [
        ("a", 0.075, 1usize, 65f64.to_radians(), vec![2usize]),
        ("b", 3.0, 2usize, 60f64.to_radians(), vec![0, 1]),
    ];
    let mut tables = Vec::new();
    let mut checks = Vec::new();
    for (label, power, axis, phi, others) in panels {
        let cfg = SystemConfig { tweezer_power: power, phi, ..base.clone() };
        let spec = SweepSpec {
            varied: vec![("cavity_halfwidth".into(), kappa_grid())],
            fixed: cfg,
            observables: vec![Observable::Occupations, Observable::Temperatures, Observable::Stability],
            resonant_axis: Some(axis),
        };
        let res = ground_state_scan(&spec)?;
        let mut t = res.to_table();
        t.comment(format!(
            "Panel {label}: P_t = {power} W, δ′ = Ω_{}′, φ = {:.0}°, Θ = 45°, √S = 1e-16 m/√Hz",
            AXES[axis],
            phi.to_degrees()
        ));
        tables.push((format!("fig9{label}"), t));
        for j in others {
            let tmin = res
                .rows
                .iter()
                .filter(|r| r.is_stable())
                .map(|r| r.temperatures[j])
                .fold(f64::INFINITY, f64::min);
            checks.push(ShapeCheck::new(
                &format!("panel {label}: T_{} below 10 µK", AXES[j]),
                tmin < 10e-6,
                format!("min T_{} = {tmin:e} K", AXES[j]),
            ));
        }
        let mins = res.minima();
        checks.push(ShapeCheck::new(
            &format!("panel {label}: ground state along {}", AXES[axis]),
            mins[axis].is_some_and(|(_, n)| n < 1.0),
            format!("min n = {:?}", mins[axis].map(|m| m.1)),
        ));
    }
    Ok(FigureData { name: FigureName::Fig9, tables, checks, presets: vec![] })
}
