//! Generic numerical kernels: principal-value integrals, polynomial roots,
//! complex eigendecomposition.

pub mod eigen;
pub mod poly;
pub mod pv;

pub use eigen::{eigen, eigenvalues, Eigen};
pub use poly::Poly;
pub use pv::{pv_cubic_integral, pv_power_integral, pv_quintic_integral};
