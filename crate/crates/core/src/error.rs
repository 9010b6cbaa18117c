use thiserror::Error;

/// Errors raised by configuration handling and by the physics pipeline.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("config error: {0}")]
    Config(String),
    #[error("NoRealRoot: displacement polynomial has no real root")]
    NoRealRoot,
    #[error("ModelBreakdown: 1 + 4Δ/Ω = {radicand:e} <= 0 on axis {axis}")]
    ModelBreakdown { axis: char, radicand: f64 },
    #[error("NoConvergence: detuning inversion stopped after {iterations} iterations, |error| = {error:e} rad/s")]
    NoConvergence { iterations: usize, error: f64 },
    #[error("Unstable: drift eigenvalue with Re = {re:e} rad/s")]
    Unstable { re: f64, im: f64 },
    #[error("DynamicallyUnstable: trajectory overflow, eigenvalue Re = {re:e} rad/s")]
    DynamicallyUnstable { re: f64, im: f64 },
    #[error("Singular: {0}")]
    Singular(String),
    #[error("NearSingular: denominator {denominator:e} vs scale {scale:e}")]
    NearSingular { denominator: f64, scale: f64 },
}

impl Error {
    /// Short variant name, printed by the CLI on physics errors.
    pub fn name(&self) -> &'static str {
        match self {
            Error::Config(_) => "ConfigError",
            Error::NoRealRoot => "NoRealRoot",
            Error::ModelBreakdown { .. } => "ModelBreakdown",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::Unstable { .. } => "Unstable",
            Error::DynamicallyUnstable { .. } => "DynamicallyUnstable",
            Error::Singular(_) => "Singular",
            Error::NearSingular { .. } => "NearSingular",
        }
    }

    pub fn is_config(&self) -> bool {
        matches!(self, Error::Config(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
