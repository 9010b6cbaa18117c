//! End-to-end assembly: configuration to drift matrices.

use serde::{Deserialize, Serialize};

use crate::displacements::{pv_constants, Displacements, PvConstants, RootSelection};
use crate::dynamics::{stability, steady_state, DriftInputs, DriftModel, MomentState, StabilityReport};
use crate::error::Result;
use crate::noise::{heating_rates, NoiseRates};
use crate::params::{derive_params, DerivedParams, Detuning, SystemConfig};
use crate::renorm::{from_bare_detuning, invert_detuning, renormalize, ModelCoefficients};

/// Stability of the selected branch, with the displacement ambiguity folded in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RootStability {
    Stable,
    Unstable,
    /// More than one real displacement root gives a stable drift.
    Uncertain,
}

impl RootStability {
    pub fn as_str(self) -> &'static str {
        match self {
            RootStability::Stable => "stable",
            RootStability::Unstable => "unstable",
            RootStability::Uncertain => "uncertain",
        }
    }
}

/// Every intermediate of the pipeline for one configuration.
#[derive(Debug, Clone)]
pub struct Model {
    pub config: SystemConfig,
    pub params: DerivedParams,
    pub pv: PvConstants,
    pub delta_tilde: f64,
    pub displacements: Displacements,
    pub coeffs: ModelCoefficients,
    pub noise: NoiseRates,
    pub drift: DriftModel<f64>,
    /// Fixed-point iterations spent on the detuning inversion.
    pub iterations: usize,
}

impl Model {
    /// Validates `cfg` and runs the chain up to the drift matrices.
    pub fn build(cfg: &SystemConfig) -> Result<Model> {
        let params = derive_params(cfg)?;
        let pv = pv_constants(&params);
        let t = cfg.gas_temperature;
        let solved = match cfg.detuning {
            Detuning::Target(d) => invert_detuning(&params, &pv, d, t, cfg.include_upsilon)?,
            Detuning::Bare(d) => from_bare_detuning(&params, &pv, d, t, cfg.include_upsilon)?,
        };
        let noise = heating_rates(&params, &solved.coeffs, cfg);
        let drift = DriftModel::build(DriftInputs::from_model(&solved.coeffs, &noise));
        Ok(Model {
            config: cfg.clone(),
            params,
            pv,
            delta_tilde: solved.delta_tilde,
            displacements: solved.displacements,
            coeffs: solved.coeffs,
            noise,
            drift,
            iterations: solved.iterations,
        })
    }

    pub fn stability(&self) -> Result<StabilityReport> {
        stability(&self.drift)
    }

    pub fn steady_state(&self) -> Result<MomentState<f64>> {
        steady_state(&self.drift)
    }

    /// The same configuration on displacement root `idx`, at the same δ̃.
    pub fn on_root(&self, idx: usize) -> Result<Model> {
        let d = self.displacements.with_root(idx, &self.params);
        let coeffs = renormalize(
            &self.params,
            &self.pv,
            &d,
            self.delta_tilde,
            self.config.gas_temperature,
            self.config.include_upsilon,
        )?;
        let noise = heating_rates(&self.params, &coeffs, &self.config);
        let drift = DriftModel::build(DriftInputs::from_model(&coeffs, &noise));
        Ok(Model { displacements: d, coeffs, noise, drift, ..self.clone() })
    }

    /// Stability of the selected root, `Uncertain` when another real root is
    /// stable as well.
    pub fn root_stability(&self) -> Result<RootStability> {
        let own = self.stability()?.stable;
        let n = self.displacements.roots.len();
        if n <= 1 {
            return Ok(if own { RootStability::Stable } else { RootStability::Unstable });
        }
        let mut stable_roots = 0;
        for i in 0..n {
            let ok = if i == self.displacements.root_selected {
                own
            } else {
                match self.on_root(i) {
                    Ok(m) => m.stability().map(|r| r.stable).unwrap_or(false),
                    Err(_) => false,
                }
            };
            stable_roots += ok as usize;
        }
        Ok(match (own, stable_roots) {
            (_, k) if k > 1 => RootStability::Uncertain,
            (true, _) => RootStability::Stable,
            (false, _) => RootStability::Unstable,
        })
    }

    /// True when several real roots exist and continuation could not pick one.
    pub fn ambiguous_root(&self) -> bool {
        self.displacements.selection == RootSelection::Fallback
    }
}
