//! Stability, steady state and exact propagation of the moment equations.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::drift::DriftModel;
use super::generator::DIM;
use super::moments::{MomentState, N_SECOND};
use crate::error::{Error, Result};
use crate::numerics::{eigen, eigenvalues, Eigen};
use crate::scalar::{cabs, cexp, cplx, lit, to_f64, Cplx, Real};

/// Growth rates above this (rad/s) count as unstable.
pub const STABILITY_THRESHOLD: f64 = -1e-12;
/// Eigenvector condition number beyond which propagation uses the matrix exponential.
pub const MAX_CONDITION: f64 = 1e12;

/// Leading eigenvalues of both drift systems.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    /// Eigenvalue of M0 with the largest real part.
    pub m0_leading: (f64, f64),
    /// Largest real part among the eigenvalues of A2.
    pub a2_max_re: f64,
    pub stable: bool,
    /// `−max Re λ`, positive when stable.
    pub margin: f64,
}

fn leading<T: Real>(values: &DVector<Cplx<T>>) -> Cplx<T> {
    let mut best = values[0];
    for &v in values.iter() {
        if v.re > best.re {
            best = v;
        }
    }
    best
}

/// Eigenvalue analysis of M0 and A2.
pub fn stability<T: Real>(dm: &DriftModel<T>) -> Result<StabilityReport> {
    let l0 = leading(&eigenvalues(&dm.m0)?);
    let l2 = leading(&eigenvalues(&dm.a2)?);
    let worst = to_f64(l0.re).max(to_f64(l2.re));
    Ok(StabilityReport {
        m0_leading: (to_f64(l0.re), to_f64(l0.im)),
        a2_max_re: to_f64(l2.re),
        stable: worst < STABILITY_THRESHOLD,
        margin: -worst,
    })
}

/// Steady state: zero first moments and `A2 S = −d2`.
pub fn steady_state<T: Real>(dm: &DriftModel<T>) -> Result<MomentState<T>> {
    let rep = stability(dm)?;
    if !rep.stable {
        let (re, im) = rep.m0_leading;
        return Err(Error::Unstable { re: re.max(rep.a2_max_re), im });
    }
    let rhs = -&dm.d2;
    let s = dm
        .a2
        .clone()
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Singular("second-moment drift matrix".into()))?;
    if s.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::Singular("non-finite steady state".into()));
    }
    let mut out = MomentState::vacuum();
    out.second = s;
    Ok(out)
}

/// `(e^x − 1)/x`, continuous at 0.
fn phi1<T: Real>(x: Cplx<T>) -> Cplx<T> {
    if cabs(x) < lit(1e-3) {
        let one = cplx(T::one(), T::zero());
        // Horner form of 1 + x/2 + x²/6 + x³/24 + x⁴/120
        let c = |d: f64| cplx(lit::<T>(1.0 / d), T::zero());
        one + x * (c(2.0) + x * (c(6.0) + x * (c(24.0) + x * c(120.0))))
    } else {
        (cexp(x) - cplx(T::one(), T::zero())) / x
    }
}

enum Method<T: Real> {
    Eigen(Eigen<T>),
    Exponential,
}

/// Propagates `dy/dt = A y + d` exactly.
struct Affine<T: Real> {
    a: DMatrix<Cplx<T>>,
    d: DVector<Cplx<T>>,
    method: Method<T>,
}

impl<T: Real> Affine<T> {
    fn new(a: DMatrix<Cplx<T>>, d: DVector<Cplx<T>>) -> Self {
        let method = match eigen(&a) {
            Ok(e) if to_f64(e.condition) < MAX_CONDITION => Method::Eigen(e),
            _ => Method::Exponential,
        };
        Affine { a, d, method }
    }

    /// Values at each of `times` starting from `y0` at `t = 0`. The times must
    /// be uniformly spaced from zero when the exponential fallback is active.
    fn run(&self, y0: &DVector<Cplx<T>>, times: &[T]) -> Vec<DVector<Cplx<T>>> {
        match &self.method {
            Method::Eigen(e) => {
                let c0 = &e.inverse * y0;
                let dz = &e.inverse * &self.d;
                times
                    .iter()
                    .map(|&t| {
                        let tc = cplx(t, T::zero());
                        let y = DVector::from_fn(c0.len(), |k, _| {
                            let lt = e.values[k] * tc;
                            cexp(lt) * c0[k] + phi1(lt) * tc * dz[k]
                        });
                        &e.vectors * y
                    })
                    .collect()
            }
            Method::Exponential => {
                let n = self.a.nrows();
                let z = cplx(T::zero(), T::zero());
                let dt = if times.len() > 1 { times[1] - times[0] } else { times[0] };
                let mut aug = DMatrix::from_element(n + 1, n + 1, z);
                aug.view_mut((0, 0), (n, n)).copy_from(&(&self.a * cplx(dt, T::zero())));
                for i in 0..n {
                    aug[(i, n)] = self.d[i] * dt;
                }
                let step = aug.exp();
                let mut y = DVector::from_fn(n + 1, |i, _| if i < n { y0[i] } else { cplx(T::one(), T::zero()) });
                let mut out = Vec::with_capacity(times.len());
                for (k, &t) in times.iter().enumerate() {
                    if k == 0 && t == T::zero() {
                        out.push(y.rows(0, n).into_owned());
                        continue;
                    }
                    y = &step * y;
                    out.push(y.rows(0, n).into_owned());
                }
                out
            }
        }
    }
}

/// Trajectory at `n_out` uniformly spaced times in `[0, t_end]`.
pub fn evolve<T: Real>(
    dm: &DriftModel<T>,
    s0: &MomentState<T>,
    t_end: T,
    n_out: usize,
) -> Result<Vec<MomentState<T>>> {
    if !(t_end > T::zero()) || n_out < 2 {
        return Err(Error::Config("evolve needs t_end > 0 and at least two output times".into()));
    }
    let times: Vec<T> = (0..n_out)
        .map(|k| t_end * lit::<T>(k as f64) / lit::<T>((n_out - 1) as f64))
        .collect();
    evolve_at(dm, s0, &times)
}

/// Trajectory at arbitrary times. Falls back to uniform stepping when the
/// eigenbasis is ill conditioned, in which case `times` must be uniform from 0.
pub fn evolve_at<T: Real>(
    dm: &DriftModel<T>,
    s0: &MomentState<T>,
    times: &[T],
) -> Result<Vec<MomentState<T>>> {
    let z = DVector::from_element(DIM, cplx(T::zero(), T::zero()));
    let first = Affine::new(dm.m0.clone(), z).run(&s0.first, times);
    let second = Affine::new(dm.a2.clone(), dm.d2.clone()).run(&s0.second, times);
    let mut out = Vec::with_capacity(times.len());
    for ((f, s), &t) in first.into_iter().zip(second).zip(times) {
        let finite = f.iter().chain(s.iter()).all(|z| z.re.is_finite() && z.im.is_finite());
        if !finite {
            let l = leading(&eigenvalues(&dm.m0)?);
            return Err(Error::DynamicallyUnstable { re: to_f64(l.re), im: to_f64(l.im) });
        }
        debug_assert_eq!(s.len(), N_SECOND);
        out.push(MomentState { first: f, second: s, time: s0.time + t });
    }
    Ok(out)
}
