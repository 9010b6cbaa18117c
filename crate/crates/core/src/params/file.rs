//! Flat `key = value [unit]` configuration files.
//!
//! Keys are the [`SystemConfig`] field names. `#` starts a comment. The
//! detuning is given by exactly one of `detuning_target` / `detuning_bare`, the
//! trap noise by exactly one of `displacement_psd` / `displacement_sigma`
//! (three comma-separated values).

use std::collections::BTreeMap;

use super::{Detuning, DisplacementNoise, SystemConfig};
use crate::consts::AIR_MOLECULE_MASS;
use crate::error::{Error, Result};
use crate::units::{parse_quantity, Dim};

/// Every accepted key with its dimension and whether it may be omitted.
pub const CONFIG_KEYS: &[(&str, Dim, bool)] = &[
    ("tweezer_power", Dim::Power, false),
    ("tweezer_wavelength", Dim::Length, false),
    ("tweezer_waist", Dim::Length, false),
    ("asym_x", Dim::Dimensionless, false),
    ("asym_y", Dim::Dimensionless, false),
    ("cavity_length", Dim::Length, false),
    ("cavity_waist", Dim::Length, false),
    ("cavity_halfwidth", Dim::Rate, false),
    ("particle_radius", Dim::Length, false),
    ("rel_permittivity", Dim::Dimensionless, false),
    ("mass_density", Dim::Density, false),
    ("theta", Dim::Angle, false),
    ("phi", Dim::Angle, false),
    ("detuning_target", Dim::Rate, true),
    ("detuning_bare", Dim::Rate, true),
    ("gas_pressure", Dim::Pressure, false),
    ("gas_temperature", Dim::Temperature, true),
    ("gas_molecule_mass", Dim::Mass, true),
    ("displacement_psd", Dim::Psd, true),
    ("displacement_sigma", Dim::Dimensionless, true),
    ("pv_cutoff_factor", Dim::Dimensionless, true),
    ("include_upsilon", Dim::Dimensionless, true),
];

fn dim_of(key: &str) -> Option<Dim> {
    CONFIG_KEYS.iter().find(|(k, _, _)| *k == key).map(|(_, d, _)| *d)
}

/// Parses a configuration file body.
pub fn parse_config(text: &str) -> Result<SystemConfig> {
    let mut raw: BTreeMap<String, String> = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", lineno + 1)))?;
        let key = key.trim();
        if dim_of(key).is_none() {
            return Err(Error::Config(format!("line {}: unknown key `{key}`", lineno + 1)));
        }
        if raw.insert(key.to_string(), value.trim().to_string()).is_some() {
            return Err(Error::Config(format!("line {}: duplicate key `{key}`", lineno + 1)));
        }
    }
    from_map(&raw)
}

fn from_map(raw: &BTreeMap<String, String>) -> Result<SystemConfig> {
    let scalar = |key: &str| -> Result<Option<f64>> {
        match raw.get(key) {
            None => Ok(None),
            Some(v) => parse_quantity(v, dim_of(key).unwrap())
                .map(Some)
                .map_err(|e| Error::Config(format!("{key}: {}", strip(e)))),
        }
    };
    let required = |key: &str| -> Result<f64> {
        scalar(key)?.ok_or_else(|| Error::Config(format!("missing required key `{key}`")))
    };
    let triple = |key: &str| -> Result<Option<[f64; 3]>> {
        let Some(v) = raw.get(key) else { return Ok(None) };
        let parts: Vec<&str> = v.split(',').collect();
        if parts.len() != 3 {
            return Err(Error::Config(format!("{key}: expected three comma-separated values")));
        }
        let mut out = [0.0; 3];
        for (o, p) in out.iter_mut().zip(parts) {
            *o = parse_quantity(p, dim_of(key).unwrap())
                .map_err(|e| Error::Config(format!("{key}: {}", strip(e))))?;
        }
        Ok(Some(out))
    };

    let detuning = match (scalar("detuning_target")?, scalar("detuning_bare")?) {
        (Some(d), None) => Detuning::Target(d),
        (None, Some(d)) => Detuning::Bare(d),
        (None, None) => {
            return Err(Error::Config(
                "missing required key `detuning_target` (or `detuning_bare`)".into(),
            ))
        }
        (Some(_), Some(_)) => {
            return Err(Error::Config(
                "give exactly one of `detuning_target` and `detuning_bare`".into(),
            ))
        }
    };
    let displacement_noise = match (triple("displacement_psd")?, triple("displacement_sigma")?) {
        (Some(s), None) => DisplacementNoise::Psd(s),
        (None, Some(s)) => DisplacementNoise::Sigma(s),
        (None, None) => {
            return Err(Error::Config(
                "missing required key `displacement_psd` (or `displacement_sigma`)".into(),
            ))
        }
        (Some(_), Some(_)) => {
            return Err(Error::Config(
                "give exactly one of `displacement_psd` and `displacement_sigma`".into(),
            ))
        }
    };
    let include_upsilon = match raw.get("include_upsilon").map(|s| s.as_str()) {
        None | Some("false") | Some("0") => false,
        Some("true") | Some("1") => true,
        Some(other) => {
            return Err(Error::Config(format!("include_upsilon: expected true/false, got `{other}`")))
        }
    };

    let cfg = SystemConfig {
        tweezer_power: required("tweezer_power")?,
        tweezer_wavelength: required("tweezer_wavelength")?,
        tweezer_waist: required("tweezer_waist")?,
        asym_x: required("asym_x")?,
        asym_y: required("asym_y")?,
        cavity_length: required("cavity_length")?,
        cavity_waist: required("cavity_waist")?,
        cavity_halfwidth: required("cavity_halfwidth")?,
        particle_radius: required("particle_radius")?,
        rel_permittivity: required("rel_permittivity")?,
        mass_density: required("mass_density")?,
        theta: required("theta")?,
        phi: required("phi")?,
        detuning,
        gas_pressure: required("gas_pressure")?,
        gas_temperature: scalar("gas_temperature")?.unwrap_or(300.0),
        gas_molecule_mass: scalar("gas_molecule_mass")?.unwrap_or(AIR_MOLECULE_MASS),
        displacement_noise,
        pv_cutoff_factor: scalar("pv_cutoff_factor")?.unwrap_or(0.1),
        include_upsilon,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn strip(e: Error) -> String {
    match e {
        Error::Config(s) => s,
        other => other.to_string(),
    }
}

/// Writes a configuration that [`parse_config`] reads back to the same values
/// (up to the last bit of the Hz/rad-s and mbar/Pa conversions).
pub fn format_config(cfg: &SystemConfig) -> String {
    use crate::units::{pa_to_mbar, to_hz};
    let mut s = String::new();
    let mut put = |k: &str, v: String| {
        s.push_str(&format!("{k} = {v}\n"));
    };
    put("tweezer_power", format!("{:e} W", cfg.tweezer_power));
    put("tweezer_wavelength", format!("{:e} m", cfg.tweezer_wavelength));
    put("tweezer_waist", format!("{:e} m", cfg.tweezer_waist));
    put("asym_x", format!("{:e}", cfg.asym_x));
    put("asym_y", format!("{:e}", cfg.asym_y));
    put("cavity_length", format!("{:e} m", cfg.cavity_length));
    put("cavity_waist", format!("{:e} m", cfg.cavity_waist));
    put("cavity_halfwidth", format!("{:e} Hz", to_hz(cfg.cavity_halfwidth)));
    put("particle_radius", format!("{:e} m", cfg.particle_radius));
    put("rel_permittivity", format!("{:e}", cfg.rel_permittivity));
    put("mass_density", format!("{:e} kg/m3", cfg.mass_density));
    put("theta", format!("{:e} rad", cfg.theta));
    put("phi", format!("{:e} rad", cfg.phi));
    match cfg.detuning {
        Detuning::Target(d) => put("detuning_target", format!("{:e} Hz", to_hz(d))),
        Detuning::Bare(d) => put("detuning_bare", format!("{:e} Hz", to_hz(d))),
    }
    put("gas_pressure", format!("{:e} mbar", pa_to_mbar(cfg.gas_pressure)));
    put("gas_temperature", format!("{:e} K", cfg.gas_temperature));
    put("gas_molecule_mass", format!("{:e} kg", cfg.gas_molecule_mass));
    match cfg.displacement_noise {
        DisplacementNoise::Psd(v) => {
            put("displacement_psd", format!("{:e}, {:e}, {:e}", v[0], v[1], v[2]))
        }
        DisplacementNoise::Sigma(v) => {
            put("displacement_sigma", format!("{:e}, {:e}, {:e}", v[0], v[1], v[2]))
        }
    }
    put("pv_cutoff_factor", format!("{:e}", cfg.pv_cutoff_factor));
    put("include_upsilon", cfg.include_upsilon.to_string());
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_reference() {
        let cfg = SystemConfig::reference();
        let back = parse_config(&format_config(&cfg)).unwrap();
        assert!((back.cavity_halfwidth / cfg.cavity_halfwidth - 1.0).abs() < 1e-14);
        assert!((back.gas_pressure / cfg.gas_pressure - 1.0).abs() < 1e-14);
        assert_eq!(back.theta, cfg.theta);
        assert_eq!(back.displacement_noise, cfg.displacement_noise);
    }

    #[test]
    fn missing_key_is_named() {
        let text: String = format_config(&SystemConfig::reference())
            .lines()
            .filter(|l| !l.starts_with("cavity_waist"))
            .map(|l| format!("{l}\n"))
            .collect();
        let err = parse_config(&text).unwrap_err();
        assert!(err.to_string().contains("cavity_waist"), "{err}");
    }

    #[test]
    fn unknown_key_rejected() {
        let text = format!("{}colour = blue\n", format_config(&SystemConfig::reference()));
        assert!(parse_config(&text).unwrap_err().to_string().contains("colour"));
    }

    #[test]
    fn unit_suffixes() {
        let text = "tweezer_power = 500mW\ntweezer_wavelength = 1.55um\ntweezer_waist = 1.08 um\n\
            asym_x = 1.03\nasym_y = 0.89\ncavity_length = 6.46mm\ncavity_waist = 48um\n\
            cavity_halfwidth = 0.53MHz\nparticle_radius = 50nm\nrel_permittivity = 2.07\n\
            mass_density = 2200\ntheta = 10deg\nphi = 0\ndetuning_target = 400kHz\n\
            gas_pressure = 1e-5mbar\ndisplacement_sigma = 0.67, 0.26, 18.6\n";
        let cfg = parse_config(text).unwrap();
        let r = SystemConfig::reference();
        assert!((cfg.cavity_halfwidth / r.cavity_halfwidth - 1.0).abs() < 1e-14);
        assert!((cfg.gas_pressure - 1e-3).abs() < 1e-18);
        assert_eq!(cfg.tweezer_power, 0.5);
    }
}
