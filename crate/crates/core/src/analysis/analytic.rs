//! Closed-form steady occupation of a single cavity-coupled axis in the
//! low-pressure limit, and its three resolved-sideband limits.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative size below which the denominator counts as singular.
pub const SINGULAR_RATIO: f64 = 1e-6;

/// Rates of one axis, all in rad/s.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalyticOccInput {
    /// |g|
    pub g: f64,
    /// δ′
    pub delta: f64,
    /// Γ_j
    pub gamma: f64,
    /// κ′
    pub kappa: f64,
    /// Ω_j′
    pub omega: f64,
}

/// `⟨b†b⟩ = (A − B + C) / (4g²δκΩ [4g²δ − (δ² + κ²)Ω])`.
pub fn analytic_occupation(i: &AnalyticOccInput) -> Result<f64> {
    let AnalyticOccInput { g, delta: d, gamma: big, kappa: k, omega: w } = *i;
    let g2 = g * g;
    let (d2, k2, w2) = (d * d, k * k, w * w);
    let lor_minus = k2 + (d - w).powi(2);
    let lor_plus = k2 + (d + w).powi(2);

    let a = 2.0 * g2 * g2 * d * (d2 * k + k2 * k + 4.0 * d * w * (big - k) + 2.0 * k * w2);
    let b = big * w * (d2 + k2) * lor_minus * lor_plus;
    let c = g2
        * (-k * w * (d2 + k2) * lor_minus
            + 2.0 * big * d * (2.0 * w2 * w2 + w2 * (3.0 * k2 - 5.0 * d2) + (d2 + k2).powi(2)));

    let bracket_terms = [4.0 * g2 * d, (d2 + k2) * w];
    let bracket = bracket_terms[0] - bracket_terms[1];
    let lead = 4.0 * g2 * d * k * w;
    let denom = lead * bracket;
    let scale = lead * bracket_terms[0].abs().max(bracket_terms[1].abs());
    if !(denom.abs() >= SINGULAR_RATIO * scale) || denom == 0.0 {
        return Err(Error::NearSingular { denominator: denom, scale });
    }
    Ok((a - b + c) / denom)
}

/// Scale hierarchies with δ = Ω under which the occupation simplifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OccupationLimit {
    /// κ ≪ |g| ≪ Ω: `Γ/κ`
    StrongCoupling,
    /// κ ≈ |g| ≪ Ω: `2Γ/κ`
    Matched,
    /// |g| ≪ κ ≪ Ω: `κΓ/|g|²`
    WeakCoupling,
}

pub fn limit_occupation(i: &AnalyticOccInput, limit: OccupationLimit) -> f64 {
    match limit {
        OccupationLimit::StrongCoupling => i.gamma / i.kappa,
        OccupationLimit::Matched => 2.0 * i.gamma / i.kappa,
        OccupationLimit::WeakCoupling => i.kappa * i.gamma / (i.g * i.g),
    }
}

/// Order-of-magnitude floor `2Γ/|g|` reached near κ ≈ |g|.
pub fn occupation_floor(gamma: f64, g: f64) -> f64 {
    2.0 * gamma / g
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weak_coupling_limit() {
        let i = AnalyticOccInput { g: 1.0, delta: 1e6, gamma: 1e-2, kappa: 1e3, omega: 1e6 };
        let n = analytic_occupation(&i).unwrap();
        let l = limit_occupation(&i, OccupationLimit::WeakCoupling);
        assert!((n / l - 1.0).abs() < 0.05, "{n} vs {l}");
    }

    #[test]
    fn singular_denominator_reported() {
        // 4g²δ = (δ² + κ²)Ω
        let (d, k, w) = (1.0f64, 1.0, 1.0);
        let g = ((d * d + k * k) * w / (4.0 * d)).sqrt();
        let i = AnalyticOccInput { g, delta: d, gamma: 1.0, kappa: k, omega: w };
        assert!(matches!(analytic_occupation(&i), Err(Error::NearSingular { .. })));
    }
}
