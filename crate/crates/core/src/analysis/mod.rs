//! Analytic occupation, parameter sweeps and figure drivers.

pub mod analytic;
pub mod figures;
pub mod sweep;
pub mod table;

pub use analytic::{analytic_occupation, limit_occupation, occupation_floor, AnalyticOccInput, OccupationLimit};

pub use figures::{figure_driver, FigureData, FigureName, ShapeCheck};
pub use sweep::{
    gamma_minimizing_power, ground_state_scan, Observable, SweepResult, SweepRow, SweepSpec,
};
pub use table::Table;
