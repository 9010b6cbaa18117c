//! Command-line front end.
//!
//! Every command reads a configuration (the reference setup when `--config`
//! is absent), applies the override flags and writes CSV. With `--out DIR`
//! the files land in `DIR` next to a `manifest.json`; otherwise the CSV goes
//! to stdout. Frequencies are in Hz at this boundary.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 configuration error, 3 physics
//! error (the error name is printed on stderr).

mod output;

pub use output::{write_atomic, ManifestFile, RunManifest, Sink, Timing};

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analysis::figures::{fig8_presets, ground_state_preset, kappa_scan};
use crate::analysis::sweep::{ground_state_scan, lin_grid, log_grid, Observable, SweepSpec};
use crate::analysis::table::Table;
use crate::analysis::{figure_driver, gamma_minimizing_power, FigureName};
use crate::consts::TWO_PI;
use crate::displacements::RootSelection;
use crate::dynamics::moments::slot_name;
use crate::dynamics::{evolve, temperatures, thermal_state, MomentState, N_SECOND};
use crate::error::Error;
use crate::model::{Model, RootStability};
use crate::params::{format_config, parse_config, Detuning, DisplacementNoise, SystemConfig, CONFIG_KEYS};
use crate::spectra::{default_grid, psd};
use crate::units::{parse_quantity, to_hz, Dim};

#[derive(Parser, Debug)]
#[command(name = "cscool", version, about = "Cavity cooling of a levitated nanoparticle by coherent scattering")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Derived and renormalized parameters, written as a re-readable config.
    Derive(ConfigArgs),
    /// All real roots of the displacement problem.
    Displacements(ConfigArgs),
    /// Steady-state moments, occupations and temperatures.
    Steady(ConfigArgs),
    /// Moment trajectory from a thermal initial state.
    Evolve {
        #[command(flatten)]
        cfg: ConfigArgs,
        /// End time, e.g. `50ms`.
        #[arg(long, default_value = "10ms")]
        t_end: String,
        #[arg(long, default_value_t = 201)]
        n_out: usize,
        #[arg(long, default_value = "300K")]
        initial_temperature: String,
    },
    /// Displacement PSD of each axis and its Lorentzian terms.
    Psd {
        #[command(flatten)]
        cfg: ConfigArgs,
        #[arg(long, default_value_t = 4096)]
        points: usize,
    },
    /// Grid scan over one or more parameters.
    Sweep {
        #[command(flatten)]
        cfg: ConfigArgs,
        /// `name=log:lo:hi:n`, `name=lin:lo:hi:n` or `name=v1,v2,...`; repeatable.
        #[arg(long = "param", required = true)]
        params: Vec<String>,
        #[arg(long, default_value = "occupations,temperatures,stability")]
        observables: String,
        /// Lock δ′ to Ω′ of this axis at every point.
        #[arg(long)]
        resonant_axis: Option<Axis>,
    },
    /// Data behind one figure (`fig2` to `fig9`) or `all`.
    Figure {
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Ground-state κ′ scan along one axis at the axis-optimal preset.
    Gscool {
        #[arg(long, value_enum)]
        axis: Axis,
        /// Displacement PSD, same on all axes.
        #[arg(long, default_value = "1e-32 m2/Hz")]
        psd: String,
        /// Tweezer power; default: Γ-minimizing for x and y, 3 W for z.
        #[arg(long)]
        power: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    fn index(self) -> usize {
        self as usize
    }
}

/// Configuration source and overrides shared by the model commands.
#[derive(Args, Debug, Clone, Default)]
pub struct ConfigArgs {
    /// `key = value unit` file; defaults to the reference setup.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Gas pressure, e.g. `1e-5mbar`.
    #[arg(long)]
    pub pressure: Option<String>,
    /// Cavity position φ (rad unless suffixed `deg`).
    #[arg(long, allow_hyphen_values = true)]
    pub phi: Option<String>,
    /// Tweezer polarization angle Θ (rad unless suffixed `deg`).
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<String>,
    /// Tweezer power, e.g. `500mW`.
    #[arg(long)]
    pub power: Option<String>,
    /// Renormalized detuning δ′, e.g. `400kHz`.
    #[arg(long, allow_hyphen_values = true)]
    pub detuning: Option<String>,
    /// Cavity field decay κ, e.g. `530kHz`.
    #[arg(long)]
    pub kappa: Option<String>,
    /// Directory for CSV files and `manifest.json`; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl ConfigArgs {
    pub fn resolve(&self) -> Result<SystemConfig, Error> {
        let mut cfg = match &self.config {
            Some(p) => {
                let text = fs::read_to_string(p)
                    .map_err(|e| Error::Config(format!("cannot read {}: {e}", p.display())))?;
                parse_config(&text)?
            }
            None => SystemConfig::reference(),
        };
        let q = |v: &Option<String>, d: Dim| v.as_deref().map(|s| parse_quantity(s, d)).transpose();
        if let Some(v) = q(&self.pressure, Dim::Pressure)? {
            cfg.gas_pressure = v;
        }
        if let Some(v) = q(&self.phi, Dim::Angle)? {
            cfg.phi = v;
        }
        if let Some(v) = q(&self.theta, Dim::Angle)? {
            cfg.theta = v;
        }
        if let Some(v) = q(&self.power, Dim::Power)? {
            cfg.tweezer_power = v;
        }
        if let Some(v) = q(&self.detuning, Dim::Rate)? {
            cfg.detuning = Detuning::Target(v);
        }
        if let Some(v) = q(&self.kappa, Dim::Rate)? {
            cfg.cavity_halfwidth = v;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug)]
pub enum CliError {
    Model(Error),
    Io(std::io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Model(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

/// Parses `argv` (including the program name), runs and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(CliError::Model(e)) if e.is_config() => {
            eprintln!("{e}");
            2
        }
        // The message leads with the error name.
        Err(CliError::Model(e)) => {
            eprintln!("{e}");
            3
        }
        Err(CliError::Io(e)) => {
            eprintln!("IoError: {e}");
            1
        }
    }
}

fn sink(command: &str, out: Option<PathBuf>) -> Sink {
    Sink { dir: out, manifest: RunManifest::new(command) }
}

fn model_warnings(m: &Model, manifest: &mut RunManifest) -> Result<(), Error> {
    if m.displacements.selection == RootSelection::Fallback
        || m.root_stability()? == RootStability::Uncertain
    {
        manifest.warn("AmbiguousRoot");
    }
    let st = m.stability()?;
    if st.stable && st.margin < 0.25 * m.noise.gamma {
        manifest.warn(format!("NearInstability: margin {:e} Hz", to_hz(st.margin)));
    }
    if m.coeffs.upsilon_warning() {
        manifest.warn("UpsilonNeglected: |Υ| exceeds 1% of |g_z′|");
    }
    if m.pv.pole_inside {
        manifest.warn("PolePastCutoff: k₀ lies inside the integration range");
    }
    Ok(())
}

fn execute(cmd: Command) -> Result<(), CliError> {
    let start = Instant::now();
    let (name, mut s) = match cmd {
        Command::Derive(a) => ("derive", derive_cmd(&a)?),
        Command::Displacements(a) => ("displacements", displacements_cmd(&a)?),
        Command::Steady(a) => ("steady", steady_cmd(&a)?),
        Command::Evolve { cfg, t_end, n_out, initial_temperature } => {
            ("evolve", evolve_cmd(&cfg, &t_end, n_out, &initial_temperature)?)
        }
        Command::Psd { cfg, points } => ("psd", psd_cmd(&cfg, points)?),
        Command::Sweep { cfg, params, observables, resonant_axis } => {
            ("sweep", sweep_cmd(&cfg, &params, &observables, resonant_axis)?)
        }
        Command::Figure { name, out } => ("figure", figure_cmd(&name, out)?),
        Command::Gscool { axis, psd, power, out } => ("gscool", gscool_cmd(axis, &psd, power, out)?),
    };
    s.manifest.timing.push(Timing { command: name.into(), seconds: start.elapsed().as_secs_f64() });
    for w in &s.manifest.warnings {
        eprintln!("warning: {w}");
    }
    s.finish()?;
    Ok(())
}

fn setup(command: &str, a: &ConfigArgs) -> Result<(Sink, SystemConfig, Model), CliError> {
    let cfg = a.resolve()?;
    let mut s = sink(command, a.out.clone());
    let m = Model::build(&cfg)?;
    s.manifest.with_config(&cfg, Some(m.params.clone()));
    model_warnings(&m, &mut s.manifest)?;
    Ok((s, cfg, m))
}

fn derive_cmd(a: &ConfigArgs) -> Result<Sink, CliError> {
    let (mut s, cfg, m) = setup("derive", a)?;
    let mut text = format_config(&cfg);
    text.push_str("# derived quantities (comments, ignored on re-read)\n");
    let mut put = |k: &str, v: f64, unit: &str| {
        text.push_str(&format!("# {k} = {} {unit}\n", crate::analysis::table::fmt_num(v)));
    };
    let p = &m.params;
    let c = &m.coeffs;
    put("mass", p.mass, "kg");
    put("polarizability", p.polarizability, "F m2");
    put("finesse", p.finesse, "");
    put("mode_volume", p.mode_volume, "m3");
    for (j, ax) in ["x", "y", "z"].iter().enumerate() {
        put(&format!("Omega_{ax}"), to_hz(p.trap_freqs[j]), "Hz");
        put(&format!("Omega_prime_{ax}"), to_hz(c.omega_prime[j]), "Hz");
        put(&format!("zero_point_{ax}"), p.zero_point[j], "m");
        put(&format!("g_prime_abs_{ax}"), to_hz(c.g_prime[j].norm()), "Hz");
        put(&format!("Gamma_recoil_{ax}"), to_hz(m.noise.gamma_r[j]), "Hz");
        put(&format!("Gamma_gas_{ax}"), to_hz(m.noise.gamma_p[j]), "Hz");
        put(&format!("Gamma_displacement_{ax}"), to_hz(m.noise.gamma_d[j]), "Hz");
        put(&format!("beta_{ax}"), m.displacements.beta[j], "");
    }
    put("delta_c", to_hz(p.delta_c), "Hz");
    put("delta_tilde", to_hz(m.delta_tilde), "Hz");
    put("delta_prime", to_hz(c.delta_prime), "Hz");
    put("delta_bare", to_hz(c.delta_bare), "Hz");
    put("kappa_B1", to_hz(c.kappa_b1), "Hz");
    put("kappa_prime", to_hz(c.kappa_prime), "Hz");
    put("upsilon_abs", to_hz(c.upsilon.norm()), "Hz");
    put("gas_damping", to_hz(m.noise.gamma), "Hz");
    put("photon_number", m.displacements.photon_number, "");
    put("C0", m.pv.c0, "");
    s.manifest.files.clear();
    match &s.dir {
        Some(d) => {
            write_atomic(&d.join("derive.cfg"), &text)?;
            s.manifest.files.push(ManifestFile { path: "derive.cfg".into(), description: "config echo plus derived values".into() });
        }
        None => print!("{text}"),
    }
    Ok(s)
}

fn displacements_cmd(a: &ConfigArgs) -> Result<Sink, CliError> {
    let (mut s, _, m) = setup("displacements", a)?;
    let d = &m.displacements;
    let mut t = Table::new(&[
        ("root", "index"),
        ("selected", "1=yes"),
        ("beta_x", "1"),
        ("beta_y", "1"),
        ("beta_z", "1"),
        ("alpha_re", "1"),
        ("alpha_im", "1"),
        ("photon_number", "1"),
        ("residual", "1"),
    ]);
    t.comment(format!("selection: {:?}; δ̃ = {} Hz", d.selection, to_hz(m.delta_tilde)));
    for (i, r) in d.roots.iter().enumerate() {
        t.push(vec![
            i as f64,
            (i == d.root_selected) as u8 as f64,
            r.beta[0],
            r.beta[1],
            r.beta[2],
            r.alpha_c.re,
            r.alpha_c.im,
            r.alpha_c.norm_sqr(),
            r.residuals.max(),
        ]);
    }
    s.emit("displacements", "real roots of the displacement problem", &t.to_csv())?;
    Ok(s)
}

fn moment_columns() -> Vec<(String, String)> {
    let mut cols: Vec<(String, String)> = Vec::new();
    for ax in ["x", "y", "z"] {
        cols.push((format!("T_{ax}"), "K".into()));
    }
    for ax in ["x", "y", "z"] {
        cols.push((format!("n_{ax}"), "1".into()));
    }
    cols.push(("cavity_photons".into(), "1".into()));
    for i in 0..N_SECOND {
        cols.push((format!("re_{}", slot_name(i)), "1".into()));
        cols.push((format!("im_{}", slot_name(i)), "1".into()));
    }
    cols
}

fn moment_values(st: &MomentState<f64>, omega: [f64; 3]) -> Vec<f64> {
    let mut v: Vec<f64> = temperatures(st, omega).to_vec();
    v.extend([0, 1, 2].map(|j| st.occupation(j)));
    v.push(st.photon_number());
    for z in st.second.iter() {
        v.push(z.re);
        v.push(z.im);
    }
    v
}

fn table_of(cols: &[(String, String)]) -> Table {
    let refs: Vec<(&str, &str)> = cols.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    Table::new(&refs)
}

fn steady_cmd(a: &ConfigArgs) -> Result<Sink, CliError> {
    let (mut s, _, m) = setup("steady", a)?;
    let ss = m.steady_state()?;
    let mut cols = vec![("stability_margin".to_string(), "Hz".to_string())];
    cols.extend(moment_columns());
    let mut t = table_of(&cols);
    t.comment("Fluctuation moments about the classical steady state; T = ħΩ′n/k_B");
    let mut v = vec![to_hz(m.stability()?.margin)];
    v.extend(moment_values(&ss, m.coeffs.omega_prime));
    t.push(v);
    s.emit("steady", "steady-state moments", &t.to_csv())?;
    Ok(s)
}

fn evolve_cmd(a: &ConfigArgs, t_end: &str, n_out: usize, t0: &str) -> Result<Sink, CliError> {
    let t_end = parse_quantity(t_end, Dim::Time)?;
    let t0 = parse_quantity(t0, Dim::Temperature)?;
    let (mut s, _, m) = setup("evolve", a)?;
    let traj = evolve(&m.drift, &thermal_state(t0, m.coeffs.omega_prime), t_end, n_out)?;
    let mut cols = vec![("time".to_string(), "s".to_string())];
    cols.extend(moment_columns());
    let mut t = table_of(&cols);
    t.comment(format!("Thermal initial state at {t0} K"));
    for st in &traj {
        let mut v = vec![st.time];
        v.extend(moment_values(st, m.coeffs.omega_prime));
        t.push(v);
    }
    s.emit("evolve", "moment trajectory", &t.to_csv())?;
    Ok(s)
}

fn psd_cmd(a: &ConfigArgs, points: usize) -> Result<Sink, CliError> {
    let (mut s, _, m) = setup("psd", a)?;
    let ss = m.steady_state()?;
    let mut grid = default_grid(&m.drift);
    if points != grid.len() && points > 1 {
        let top = *grid.last().unwrap();
        grid = lin_grid(0.0, top, points);
    }
    let spectra = (0..3)
        .map(|j| psd(&m.drift, &ss, j, m.params.zero_point[j], &grid))
        .collect::<Result<Vec<_>, Error>>()?;
    let mut t = Table::new(&[("frequency", "Hz"), ("S_x", "m2/Hz"), ("S_y", "m2/Hz"), ("S_z", "m2/Hz")]);
    t.comment("Two-sided displacement PSD per unit cyclic frequency");
    for (k, &w) in grid.iter().enumerate() {
        t.push(vec![to_hz(w), spectra[0].s[k] * TWO_PI, spectra[1].s[k] * TWO_PI, spectra[2].s[k] * TWO_PI]);
    }
    let mut poles = Table::new(&[
        ("axis", "0=x,1=y,2=z"),
        ("pole_re", "Hz"),
        ("pole_im", "Hz"),
        ("weight_re", "m2"),
        ("weight_im", "m2"),
        ("main", "1=main peak"),
    ]);
    poles.comment("S(ω) = Σ 2 Re[−W/(λ + iω)] with ω and λ in rad/s; W per rad/s");
    let mut peaks = Table::new(&[("axis", "0=x,1=y,2=z"), ("center", "Hz"), ("fwhm", "Hz"), ("fwhm_half_max", "Hz")]);
    for (j, sr) in spectra.iter().enumerate() {
        let main = crate::spectra::main_peak(&sr.terms, m.coeffs.omega_prime[j]);
        for (i, term) in sr.terms.iter().enumerate() {
            poles.push(vec![
                j as f64,
                to_hz(term.pole.re),
                to_hz(term.pole.im),
                term.weight.re,
                term.weight.im,
                (Some(i) == main) as u8 as f64,
            ]);
        }
        peaks.push(vec![j as f64, to_hz(sr.peak_center), to_hz(sr.fwhm_main), to_hz(sr.fwhm_numeric)]);
        if sr.overlapping {
            s.manifest.warn(format!("OverlappingPeaks: axis {j}"));
        }
    }
    s.emit("psd", "displacement PSD", &t.to_csv())?;
    if s.dir.is_some() {
        s.emit("psd_poles", "Lorentzian poles and weights", &poles.to_csv())?;
        s.emit("psd_peaks", "main-peak centres and widths", &peaks.to_csv())?;
    }
    Ok(s)
}

fn dim_of_path(path: &str) -> Dim {
    match path {
        "displacement_psd" => Dim::Psd,
        "displacement_sigma" => Dim::Dimensionless,
        _ => CONFIG_KEYS
            .iter()
            .find(|(k, _, _)| *k == path)
            .map(|(_, d, _)| *d)
            .unwrap_or(Dim::Dimensionless),
    }
}

/// Parses `name=log:lo:hi:n`, `name=lin:lo:hi:n` or `name=v1,v2,...`.
pub fn parse_grid(spec: &str) -> Result<(String, Vec<f64>), Error> {
    let (name, rest) = spec
        .split_once('=')
        .ok_or_else(|| Error::Config(format!("grid `{spec}` must look like name=...")))?;
    let name = name.trim().to_string();
    let dim = dim_of_path(&name);
    let q = |s: &str| parse_quantity(s, dim);
    let parts: Vec<&str> = rest.split(':').collect();
    let grid = match parts.as_slice() {
        [kind @ ("log" | "lin"), lo, hi, n] => {
            let n: usize = n
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("bad point count in `{spec}`")))?;
            let (lo, hi) = (q(lo)?, q(hi)?);
            if *kind == "log" {
                if !(lo > 0.0 && hi > 0.0) {
                    return Err(Error::Config(format!("log grid needs positive bounds in `{spec}`")));
                }
                log_grid(lo, hi, n)
            } else {
                lin_grid(lo, hi, n)
            }
        }
        [list] => list.split(',').map(q).collect::<Result<Vec<_>, _>>()?,
        _ => return Err(Error::Config(format!("cannot parse grid `{spec}`"))),
    };
    Ok((name, grid))
}

fn sweep_cmd(
    a: &ConfigArgs,
    params: &[String],
    observables: &str,
    resonant: Option<Axis>,
) -> Result<Sink, CliError> {
    let cfg = a.resolve()?;
    let mut s = sink("sweep", a.out.clone());
    s.manifest.with_config(&cfg, None);
    let varied = params.iter().map(|p| parse_grid(p)).collect::<Result<Vec<_>, _>>()?;
    let observables = observables
        .split(',')
        .map(|o| Observable::parse(o.trim()))
        .collect::<Result<Vec<_>, _>>()?;
    let spec = SweepSpec { varied, fixed: cfg, observables, resonant_axis: resonant.map(Axis::index) };
    let res = ground_state_scan(&spec)?;
    for (j, m) in res.minima().iter().enumerate() {
        if let Some((i, n)) = m {
            s.manifest.presets.push((format!("min_n_{}", ["x", "y", "z"][j]), *n));
            s.manifest.presets.push((format!("min_row_{}", ["x", "y", "z"][j]), *i as f64));
        }
    }
    if res.rows.iter().any(|r| r.stability == Some(RootStability::Uncertain)) {
        s.manifest.warn("AmbiguousRoot");
    }
    s.emit("sweep", "sweep table", &res.to_table().to_csv())?;
    Ok(s)
}

fn figure_cmd(name: &str, out: Option<PathBuf>) -> Result<Sink, CliError> {
    let names = if name == "all" { FigureName::ALL.to_vec() } else { vec![FigureName::parse(name)?] };
    let mut s = sink("figure", out);
    for f in names {
        let start = Instant::now();
        let data = figure_driver(f)?;
        for (stem, t) in &data.tables {
            s.emit(stem, &format!("{} data", f.as_str()), &t.to_csv())?;
        }
        for c in &data.checks {
            eprintln!("{} {}: {} ({})", if c.passed { "PASS" } else { "FAIL" }, f.as_str(), c.name, c.detail);
        }
        s.manifest.checks.extend(data.checks);
        s.manifest.presets.extend(data.presets.into_iter().map(|(k, v)| (format!("{}.{k}", f.as_str()), v)));
        s.manifest.timing.push(Timing { command: f.as_str().into(), seconds: start.elapsed().as_secs_f64() });
    }
    Ok(s)
}

fn gscool_cmd(axis: Axis, psd_text: &str, power: Option<String>, out: Option<PathBuf>) -> Result<Sink, CliError> {
    let j = axis.index();
    let psd_v = parse_quantity(psd_text, Dim::Psd)?;
    let mut cfg = if j == 2 {
        let mut c = fig8_presets()?[2].clone();
        c.displacement_noise = DisplacementNoise::Psd([psd_v; 3]);
        c
    } else {
        ground_state_preset(j, psd_v)
    };
    match power {
        Some(p) => cfg.tweezer_power = parse_quantity(&p, Dim::Power)?,
        None if j < 2 => cfg.tweezer_power = gamma_minimizing_power(&cfg, j, 1e-3, 10.0)?,
        None => {}
    }
    let mut s = sink("gscool", out);
    s.manifest.with_config(&cfg, None);
    let scan = kappa_scan(&cfg, j)?;
    let mut t = scan.result.to_table();
    t.comment(format!("tweezer power {} W; δ′ = Ω′ of the cooled axis", cfg.tweezer_power));
    s.manifest.presets.push(("tweezer_power_W".into(), cfg.tweezer_power));
    s.manifest.presets.push(("min_occupation".into(), scan.min_occupation));
    s.manifest.presets.push(("kappa_over_g".into(), scan.kappa_over_g));
    s.manifest.presets.push(("floor_2Gamma_over_g".into(), scan.floor));
    eprintln!(
        "min n = {:.4} at κ′/|g′| = {:.3}; 2Γ/|g′| = {:.4}; P_t = {:.4} W",
        scan.min_occupation, scan.kappa_over_g, scan.floor, cfg.tweezer_power
    );
    if scan.uncertain_points > 0 {
        s.manifest.warn(format!("AmbiguousRoot: {} points of uncertain stability", scan.uncertain_points));
    }
    s.emit("gscool", "κ′ scan", &t.to_csv())?;
    Ok(s)
}
