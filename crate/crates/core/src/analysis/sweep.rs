//! Parameter grids evaluated in parallel, one full model solve per point.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::table::Table;
use crate::consts::TWO_PI;
use crate::displacements::{pv_constants, Displacements};
use crate::dynamics::temperatures;
use crate::error::{Error, Result};
use crate::model::{Model, RootStability};
use crate::noise::{heating_rates, NoiseRates};
use crate::params::{derive_params, Detuning, DisplacementNoise, SystemConfig};
use crate::renorm::{renormalize, ModelCoefficients};
use crate::spectra::psd;

/// Quantities recorded per grid point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Observable {
    Temperatures,
    Occupations,
    Fwhm,
    Stability,
    Displacements,
    PhotonNumber,
}

impl Observable {
    pub const ALL: [Observable; 6] = [
        Observable::Temperatures,
        Observable::Occupations,
        Observable::Fwhm,
        Observable::Stability,
        Observable::Displacements,
        Observable::PhotonNumber,
    ];

    pub fn parse(s: &str) -> Result<Observable> {
        Ok(match s {
            "temperatures" => Observable::Temperatures,
            "occupations" => Observable::Occupations,
            "fwhm" => Observable::Fwhm,
            "stability" => Observable::Stability,
            "displacements" => Observable::Displacements,
            "photon_number" => Observable::PhotonNumber,
            _ => return Err(Error::Config(format!("unknown observable `{s}`"))),
        })
    }
}

/// Parameters that can be varied, with the unit of their CSV column.
pub const SWEEP_PATHS: &[(&str, &str)] = &[
    ("tweezer_power", "W"),
    ("tweezer_waist", "m"),
    ("cavity_halfwidth", "Hz"),
    ("cavity_length", "m"),
    ("cavity_waist", "m"),
    ("particle_radius", "m"),
    ("theta", "rad"),
    ("phi", "rad"),
    ("detuning_target", "Hz"),
    ("detuning_bare", "Hz"),
    ("gas_pressure", "mbar"),
    ("gas_temperature", "K"),
    ("displacement_psd", "m2/Hz"),
    ("displacement_sigma", "1"),
];

/// Sets `path` on `cfg` to the SI value `v` (rates in rad/s, pressure in Pa).
/// The displacement-noise paths set all three axes.
pub fn set_param(cfg: &mut SystemConfig, path: &str, v: f64) -> Result<()> {
    match path {
        "tweezer_power" => cfg.tweezer_power = v,
        "tweezer_waist" => cfg.tweezer_waist = v,
        "cavity_halfwidth" => cfg.cavity_halfwidth = v,
        "cavity_length" => cfg.cavity_length = v,
        "cavity_waist" => cfg.cavity_waist = v,
        "particle_radius" => cfg.particle_radius = v,
        "theta" => cfg.theta = v,
        "phi" => cfg.phi = v,
        "detuning_target" => cfg.detuning = Detuning::Target(v),
        "detuning_bare" => cfg.detuning = Detuning::Bare(v),
        "gas_pressure" => cfg.gas_pressure = v,
        "gas_temperature" => cfg.gas_temperature = v,
        "displacement_psd" => cfg.displacement_noise = DisplacementNoise::Psd([v; 3]),
        "displacement_sigma" => cfg.displacement_noise = DisplacementNoise::Sigma([v; 3]),
        _ => return Err(Error::Config(format!("unknown sweep parameter `{path}`"))),
    }
    Ok(())
}

/// SI value to the CSV unit of `path`.
pub fn path_to_display(path: &str, v: f64) -> f64 {
    match path {
        "cavity_halfwidth" | "detuning_target" | "detuning_bare" => v / TWO_PI,
        "gas_pressure" => crate::units::pa_to_mbar(v),
        _ => v,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    /// Parameter paths and their SI grids; the last one varies fastest.
    pub varied: Vec<(String, Vec<f64>)>,
    pub fixed: SystemConfig,
    pub observables: Vec<Observable>,
    /// Lock δ′ to Ω_j′ of this axis at every point.
    pub resonant_axis: Option<usize>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.varied.is_empty() {
            return Err(Error::Config("sweep needs at least one varied parameter".into()));
        }
        for (path, grid) in &self.varied {
            if grid.is_empty() {
                return Err(Error::Config(format!("empty grid for `{path}`")));
            }
            set_param(&mut self.fixed.clone(), path, grid[0])?;
        }
        if self.resonant_axis.is_some_and(|a| a > 2) {
            return Err(Error::Config("resonant axis must be 0, 1 or 2".into()));
        }
        self.fixed.validate()
    }

    /// Every grid point as a list of values, in row-major order.
    pub fn points(&self) -> Vec<Vec<f64>> {
        let mut pts = vec![Vec::new()];
        for (_, grid) in &self.varied {
            pts = pts
                .into_iter()
                .flat_map(|p| grid.iter().map(move |&v| [p.clone(), vec![v]].concat()))
                .collect();
        }
        pts
    }

    pub fn config_at(&self, point: &[f64]) -> Result<SystemConfig> {
        let mut cfg = self.fixed.clone();
        for ((path, _), &v) in self.varied.iter().zip(point) {
            set_param(&mut cfg, path, v)?;
        }
        if let Some(axis) = self.resonant_axis {
            let (mc, _) = static_rates(&cfg)?;
            cfg.detuning = Detuning::Target(mc.omega_prime[axis]);
        }
        Ok(cfg)
    }
}

/// Result of one grid point. Missing values are NaN.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub point: Vec<f64>,
    pub stability: Option<RootStability>,
    pub occupations: [f64; 3],
    pub temperatures: [f64; 3],
    pub fwhm: [f64; 3],
    pub beta: [f64; 3],
    pub photon_number: f64,
    pub kappa_prime: f64,
    pub coupling: [f64; 3],
    pub omega_prime: [f64; 3],
    pub gamma_total: [f64; 3],
    pub error: Option<String>,
}

impl SweepRow {
    fn empty(point: Vec<f64>) -> SweepRow {
        let nan = f64::NAN;
        SweepRow {
            point,
            stability: None,
            occupations: [nan; 3],
            temperatures: [nan; 3],
            fwhm: [nan; 3],
            beta: [nan; 3],
            photon_number: nan,
            kappa_prime: nan,
            coupling: [nan; 3],
            omega_prime: [nan; 3],
            gamma_total: [nan; 3],
            error: None,
        }
    }

    /// Occupations are meaningful only on a stable branch.
    pub fn is_stable(&self) -> bool {
        self.stability == Some(RootStability::Stable) && self.error.is_none()
    }
}

/// Solves one configuration, recording any failure in the row.
pub fn evaluate_point(cfg: &SystemConfig, point: Vec<f64>, want_fwhm: bool) -> SweepRow {
    let mut row = SweepRow::empty(point);
    let m = match Model::build(cfg) {
        Ok(m) => m,
        Err(e) => {
            row.error = Some(e.name().to_string());
            return row;
        }
    };
    row.beta = m.displacements.beta;
    row.photon_number = m.displacements.photon_number;
    row.kappa_prime = m.coeffs.kappa_prime;
    row.coupling = m.coeffs.g_prime.map(|g| g.norm());
    row.omega_prime = m.coeffs.omega_prime;
    row.gamma_total = m.noise.gamma_total;
    match m.root_stability() {
        Ok(s) => row.stability = Some(s),
        Err(e) => {
            row.error = Some(e.name().to_string());
            return row;
        }
    }
    if row.stability == Some(RootStability::Unstable) {
        return row;
    }
    match m.steady_state() {
        Ok(ss) => {
            row.occupations = [0, 1, 2].map(|j| ss.occupation(j));
            row.temperatures = temperatures(&ss, m.coeffs.omega_prime);
            if want_fwhm {
                for j in 0..3 {
                    if let Ok(sr) = psd(&m.drift, &ss, j, m.params.zero_point[j], &[]) {
                        row.fwhm[j] = sr.fwhm_main;
                    }
                }
            }
        }
        Err(e) => row.error = Some(e.name().to_string()),
    }
    row
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub spec: SweepSpec,
    pub rows: Vec<SweepRow>,
}

/// Evaluates every grid point in parallel; rows keep grid order.
pub fn ground_state_scan(spec: &SweepSpec) -> Result<SweepResult> {
    spec.validate()?;
    let want_fwhm = spec.observables.contains(&Observable::Fwhm);
    let rows = spec
        .points()
        .into_par_iter()
        .map(|pt| match spec.config_at(&pt) {
            Ok(cfg) => evaluate_point(&cfg, pt, want_fwhm),
            Err(e) => {
                let mut r = SweepRow::empty(pt);
                r.error = Some(e.name().to_string());
                r
            }
        })
        .collect();
    Ok(SweepResult { spec: spec.clone(), rows })
}

impl SweepResult {
    /// Smallest stable occupation per axis as `(row index, value)`.
    pub fn minima(&self) -> [Option<(usize, f64)>; 3] {
        [0, 1, 2].map(|j| {
            self.rows
                .iter()
                .enumerate()
                .filter(|(_, r)| r.is_stable() && r.occupations[j].is_finite())
                .min_by(|a, b| a.1.occupations[j].total_cmp(&b.1.occupations[j]))
                .map(|(i, r)| (i, r.occupations[j]))
        })
    }

    /// CSV table with the requested observables. Rates are in Hz.
    pub fn to_table(&self) -> Table {
        let unit_of = |p: &str| SWEEP_PATHS.iter().find(|(k, _)| *k == p).map_or("SI", |(_, u)| *u);
        let mut cols: Vec<(String, String)> = self
            .spec
            .varied
            .iter()
            .map(|(p, _)| (p.clone(), unit_of(p).to_string()))
            .collect();
        let obs = &self.spec.observables;
        let axes = ["x", "y", "z"];
        let add = |cols: &mut Vec<(String, String)>, name: &str, unit: &str| {
            for a in axes {
                cols.push((format!("{name}_{a}"), unit.to_string()));
            }
        };
        if obs.contains(&Observable::Occupations) {
            add(&mut cols, "n", "1");
        }
        if obs.contains(&Observable::Temperatures) {
            add(&mut cols, "T", "K");
        }
        if obs.contains(&Observable::Fwhm) {
            add(&mut cols, "fwhm", "Hz");
        }
        if obs.contains(&Observable::Displacements) {
            add(&mut cols, "beta", "1");
        }
        if obs.contains(&Observable::PhotonNumber) {
            cols.push(("photon_number".into(), "1".into()));
        }
        if obs.contains(&Observable::Stability) {
            cols.push(("stability".into(), "1=stable,0=unstable,0.5=uncertain".into()));
        }
        cols.push(("kappa_prime".into(), "Hz".into()));
        add(&mut cols, "g_abs", "Hz");
        let names: Vec<(&str, &str)> = cols.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        let mut t = Table::new(&names);
        for r in &self.rows {
            let mut v: Vec<f64> = self
                .spec
                .varied
                .iter()
                .zip(&r.point)
                .map(|((p, _), &x)| path_to_display(p, x))
                .collect();
            if obs.contains(&Observable::Occupations) {
                v.extend(r.occupations);
            }
            if obs.contains(&Observable::Temperatures) {
                v.extend(r.temperatures);
            }
            if obs.contains(&Observable::Fwhm) {
                v.extend(r.fwhm.map(|w| w / TWO_PI));
            }
            if obs.contains(&Observable::Displacements) {
                v.extend(r.beta);
            }
            if obs.contains(&Observable::PhotonNumber) {
                v.push(r.photon_number);
            }
            if obs.contains(&Observable::Stability) {
                v.push(match r.stability {
                    Some(RootStability::Stable) => 1.0,
                    Some(RootStability::Unstable) => 0.0,
                    Some(RootStability::Uncertain) => 0.5,
                    None => f64::NAN,
                });
            }
            v.push(r.kappa_prime / TWO_PI);
            v.extend(r.coupling.map(|g| g / TWO_PI));
            let note = match (&r.error, r.stability) {
                (Some(e), _) => e.clone(),
                (None, Some(RootStability::Uncertain)) => "AmbiguousRoot".into(),
                _ => String::new(),
            };
            t.push_with_note(v, note);
        }
        t
    }
}

/// Coefficients and heating rates that do not depend on the displacements
/// (Ω_j′, χ_j, Γ_j), evaluated with the particle undisplaced.
pub fn static_rates(cfg: &SystemConfig) -> Result<(ModelCoefficients, NoiseRates)> {
    let p = derive_params(cfg)?;
    let pv = pv_constants(&p);
    let mc = renormalize(&p, &pv, &Displacements::zero(), 0.0, cfg.gas_temperature, false)?;
    let nr = heating_rates(&p, &mc, cfg);
    Ok((mc, nr))
}

/// Tweezer power in `[lo, hi]` minimizing Γ_j, by golden-section search in
/// log power.
pub fn gamma_minimizing_power(cfg: &SystemConfig, axis: usize, lo: f64, hi: f64) -> Result<f64> {
    let gamma_at = |lp: f64| -> Result<f64> {
        let mut c = cfg.clone();
        c.tweezer_power = lp.exp();
        Ok(static_rates(&c)?.1.gamma_total[axis])
    };
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo.ln(), hi.ln());
    let mut x1 = b - r * (b - a);
    let mut x2 = a + r * (b - a);
    let (mut f1, mut f2) = (gamma_at(x1)?, gamma_at(x2)?);
    while b - a > 1e-7 {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = gamma_at(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = gamma_at(x2)?;
        }
    }
    Ok((0.5 * (a + b)).exp())
}

/// `n` points spaced logarithmically over `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|k| (a + (b - a) * k as f64 / (n - 1) as f64).exp()).collect()
}

/// `n` points spaced linearly over `[lo, hi]`.
pub fn lin_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()
}
