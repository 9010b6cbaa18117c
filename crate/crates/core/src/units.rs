//! Unit handling at the text boundary.
//!
//! Internally every quantity is SI with angular rates in rad/s. Text inputs may
//! carry a suffix; cyclic-frequency suffixes (Hz, kHz, ...) are multiplied by 2π.

use crate::consts::{PA_PER_MBAR, TWO_PI};
use crate::error::{Error, Result};

/// Physical dimension of a configuration value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dim {
    Length,
    Power,
    /// Angular rate; Hz-type suffixes are converted with 2π.
    Rate,
    Pressure,
    Temperature,
    Mass,
    Density,
    Angle,
    /// Displacement PSD, m²/Hz.
    Psd,
    Time,
    Dimensionless,
}

impl Dim {
    fn suffixes(self) -> &'static [(&'static str, f64)] {
        match self {
            Dim::Length => &[
                ("nm", 1e-9),
                ("um", 1e-6),
                ("µm", 1e-6),
                ("mm", 1e-3),
                ("cm", 1e-2),
                ("m", 1.0),
            ],
            Dim::Power => &[("uW", 1e-6), ("mW", 1e-3), ("W", 1.0)],
            Dim::Rate => &[
                ("rad/s", 1.0),
                ("GHz", TWO_PI * 1e9),
                ("MHz", TWO_PI * 1e6),
                ("kHz", TWO_PI * 1e3),
                ("Hz", TWO_PI),
            ],
            Dim::Pressure => &[("mbar", PA_PER_MBAR), ("Pa", 1.0)],
            Dim::Temperature => &[("mK", 1e-3), ("uK", 1e-6), ("K", 1.0)],
            Dim::Mass => &[("amu", 1.660_539_066_6e-27), ("kg", 1.0)],
            Dim::Density => &[("kg/m3", 1.0)],
            Dim::Angle => &[("deg", std::f64::consts::PI / 180.0), ("rad", 1.0)],
            Dim::Psd => &[("m2/Hz", 1.0)],
            Dim::Time => &[("us", 1e-6), ("ms", 1e-3), ("s", 1.0)],
            Dim::Dimensionless => &[],
        }
    }
}

/// Parses `"<number>[ ]<suffix>"` into an SI value of dimension `dim`.
pub fn parse_quantity(text: &str, dim: Dim) -> Result<f64> {
    let t = text.trim();
    if t.is_empty() {
        return Err(Error::Config("empty value".into()));
    }
    let split = t
        .char_indices()
        .find(|&(i, ch)| {
            ch.is_alphabetic() && !is_exponent(t, i) || ch == 'µ' || ch == '/'
        })
        .map(|(i, _)| i)
        .unwrap_or(t.len());
    let (num, unit) = t.split_at(split);
    let value: f64 = num
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("cannot parse number in `{text}`")))?;
    let unit = unit.trim();
    if unit.is_empty() {
        return Ok(value);
    }
    dim.suffixes()
        .iter()
        .find(|(s, _)| *s == unit)
        .map(|(_, f)| value * f)
        .ok_or_else(|| Error::Config(format!("unit `{unit}` not valid for {dim:?} in `{text}`")))
}

// `e`/`E` directly after a digit and before a sign or digit is an exponent marker.
fn is_exponent(t: &str, i: usize) -> bool {
    let b = t.as_bytes();
    if !(b[i] == b'e' || b[i] == b'E') || i == 0 {
        return false;
    }
    let prev_ok = b[i - 1].is_ascii_digit() || b[i - 1] == b'.';
    let next_ok = b
        .get(i + 1)
        .map(|c| c.is_ascii_digit() || *c == b'-' || *c == b'+')
        .unwrap_or(false);
    prev_ok && next_ok
}

/// Angular rate to cyclic frequency in Hz.
#[inline]
pub fn to_hz(omega: f64) -> f64 {
    omega / TWO_PI
}

/// Cyclic frequency in Hz to angular rate.
#[inline]
pub fn from_hz(f: f64) -> f64 {
    f * TWO_PI
}

#[inline]
pub fn mbar_to_pa(p: f64) -> f64 {
    p * PA_PER_MBAR
}

#[inline]
pub fn pa_to_mbar(p: f64) -> f64 {
    p / PA_PER_MBAR
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) {
        assert!((a - b).abs() <= 1e-15 * b.abs(), "{a} vs {b}");
    }

    #[test]
    fn suffixes() {
        close(parse_quantity("1.55um", Dim::Length).unwrap(), 1.55e-6);
        close(parse_quantity("50 nm", Dim::Length).unwrap(), 50e-9);
        close(parse_quantity("500mW", Dim::Power).unwrap(), 0.5);
        close(parse_quantity("1e-5mbar", Dim::Pressure).unwrap(), 1e-3);
        let w = parse_quantity("400kHz", Dim::Rate).unwrap();
        assert!((w - TWO_PI * 4e5).abs() < 1e-6);
        let a = parse_quantity("90deg", Dim::Angle).unwrap();
        assert!((a - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        close(parse_quantity("2.5e3", Dim::Rate).unwrap(), 2.5e3);
        close(parse_quantity("1E-9 Pa", Dim::Pressure).unwrap(), 1e-9);
    }

    #[test]
    fn wrong_unit_is_error() {
        assert!(parse_quantity("3 mbar", Dim::Length).is_err());
        assert!(parse_quantity("abc", Dim::Length).is_err());
        assert!(parse_quantity("", Dim::Length).is_err());
    }
}
