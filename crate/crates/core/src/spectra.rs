//! Motional power spectral densities from the quantum regression theorem.
//!
//! With `u(τ) = ⟨δv(τ) δq_j(0)⟩`, regression gives `du/dτ = M0 u`, so the
//! correlation `C(τ) = ⟨q_j(τ) q_j(0)⟩` is a sum of exponentials over the
//! eigenvalues λ_l of M0 and
//!
//! ```text
//! S_jj(ω) = (r_j0²/2π) ∫ C(τ) e^{iωτ} dτ = Σ_l 2 Re[−W_l / (λ_l + iω)]
//! ```
//!
//! in m²·s (two-sided, per unit angular frequency). A pole λ contributes a
//! Lorentzian centred at ω = −Im λ with FWHM 2|Re λ|.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::dynamics::generator::{b_idx, bd_idx, DIM};
use crate::dynamics::{DriftModel, MomentState};
use crate::error::{Error, Result};
use crate::numerics::eigen;
use crate::scalar::{cabs, cexp, cplx, lit, to_f64, Cplx, Real};

/// Window around Ω_j′ in which the main peak is searched, relative.
pub const MAIN_PEAK_WINDOW: f64 = 0.3;
/// Relative mismatch between pole and half-maximum widths flagged as overlap.
pub const OVERLAP_TOLERANCE: f64 = 0.05;

/// One pole of the spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LorentzianTerm<T: Real> {
    pub pole: Cplx<T>,
    pub weight: Cplx<T>,
}

impl<T: Real> LorentzianTerm<T> {
    pub fn eval(&self, omega: T) -> T {
        let w = -self.weight / (self.pole + cplx(T::zero(), omega));
        w.re + w.re
    }

    /// Peak height estimate `|W| / |Re λ|`.
    pub fn height(&self) -> T {
        cabs(self.weight) / self.pole.re.abs()
    }
}

/// How the spectrum was evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpectrumMethod {
    Poles,
    /// Dense resolvent solves, used for an ill-conditioned eigenbasis.
    Resolvent,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumResult<T: Real> {
    pub axis: usize,
    pub omega: Vec<T>,
    /// S_jj(ω), m²·s.
    pub s: Vec<T>,
    pub terms: Vec<LorentzianTerm<T>>,
    /// FWHM of the main peak, rad/s.
    pub fwhm_main: T,
    pub peak_center: T,
    /// Half-maximum width measured on a refined grid.
    pub fwhm_numeric: T,
    /// Pole and half-maximum widths differ by more than 5%.
    pub overlapping: bool,
    pub method: SpectrumMethod,
}

impl<T: Real> SpectrumResult<T> {
    /// Sum of the Lorentzian terms at `omega`.
    pub fn eval_terms(&self, omega: T) -> T {
        self.terms.iter().fold(T::zero(), |s, t| s + t.eval(omega))
    }
}

fn initial_vector<T: Real>(ss: &MomentState<T>, axis: usize) -> DVector<Cplx<T>> {
    let (b, bd) = (b_idx(axis), bd_idx(axis));
    let mean_q = ss.first[b] + ss.first[bd];
    DVector::from_fn(DIM, |k, _| ss.pair(k, b) + ss.pair(k, bd) - ss.first[k] * mean_q)
}

/// `C(τ) = ⟨δq_j(τ) δq_j(0)⟩` at the given delays, by direct propagation.
pub fn correlation<T: Real>(
    dm: &DriftModel<T>,
    ss: &MomentState<T>,
    axis: usize,
    taus: &[T],
) -> Result<Vec<Cplx<T>>> {
    let u0 = initial_vector(ss, axis);
    let e = eigen(&dm.m0)?;
    let c0 = &e.inverse * &u0;
    let (b, bd) = (b_idx(axis), bd_idx(axis));
    Ok(taus
        .iter()
        .map(|&t| {
            let mut acc = cplx(T::zero(), T::zero());
            for l in 0..DIM {
                let v = e.vectors[(b, l)] + e.vectors[(bd, l)];
                acc += c0[l] * v * cexp(e.values[l] * cplx(t, T::zero()));
            }
            acc
        })
        .collect())
}

fn resolvent_value<T: Real>(
    m0: &DMatrix<Cplx<T>>,
    u0: &DVector<Cplx<T>>,
    axis: usize,
    scale: T,
    omega: T,
) -> Result<T> {
    let shifted = m0 + DMatrix::identity(DIM, DIM) * cplx(T::zero(), omega);
    let x = shifted
        .lu()
        .solve(u0)
        .ok_or_else(|| Error::Singular("resolvent at grid point".into()))?;
    let sp = -(x[b_idx(axis)] + x[bd_idx(axis)]) * scale;
    Ok(sp.re + sp.re)
}

/// Index of the main peak: the pole carrying the largest area among those
/// whose centre lies within 30% of `omega_j`. Height would favour a narrow
/// resonance of a neighbouring axis leaking into this spectrum.
pub fn main_peak<T: Real>(terms: &[LorentzianTerm<T>], omega_j: T) -> Option<usize> {
    let win = omega_j * lit::<T>(MAIN_PEAK_WINDOW);
    let mut best: Option<(usize, T)> = None;
    for (i, t) in terms.iter().enumerate() {
        let centre = -t.pole.im;
        if (centre - omega_j).abs() > win || t.pole.re == T::zero() {
            continue;
        }
        let h = t.weight.re;
        if best.map_or(true, |(_, bh)| h > bh) {
            best = Some((i, h));
        }
    }
    best.map(|(i, _)| i)
}

// Half-maximum width of `f` around `centre`, scanning ±`span`.
fn half_max_width<T: Real, F: Fn(T) -> Result<T>>(f: F, centre: T, span: T) -> Result<(T, T)> {
    let n = 4001;
    let xs: Vec<T> = (0..n)
        .map(|k| centre - span + span * lit::<T>(2.0 * k as f64 / (n - 1) as f64))
        .collect();
    let ys: Vec<T> = xs.iter().map(|&x| f(x)).collect::<Result<_>>()?;
    let (imax, &ymax) = ys
        .iter()
        .enumerate()
        .fold((0, &ys[0]), |m, (i, y)| if *y > *m.1 { (i, y) } else { m });
    let half = ymax * lit::<T>(0.5);
    let cross = |range: Box<dyn Iterator<Item = usize>>| -> Option<T> {
        for k in range {
            let (a, b) = (k, k + 1);
            if (ys[a] - half) * (ys[b] - half) <= T::zero() && ys[a] != ys[b] {
                let t = (half - ys[a]) / (ys[b] - ys[a]);
                return Some(xs[a] + (xs[b] - xs[a]) * t);
            }
        }
        None
    };
    let left = cross(Box::new((0..imax).rev()));
    let right = cross(Box::new(imax..n - 1));
    match (left, right) {
        (Some(l), Some(r)) => Ok((r - l, xs[imax])),
        _ => Ok((span + span, xs[imax])),
    }
}

/// Two-sided PSD of axis `axis` on `grid` (rad/s). `zero_point` is r_j0 in m.
pub fn psd<T: Real>(
    dm: &DriftModel<T>,
    ss: &MomentState<T>,
    axis: usize,
    zero_point: T,
    grid: &[T],
) -> Result<SpectrumResult<T>> {
    let scale = zero_point * zero_point / T::two_pi();
    let u0 = initial_vector(ss, axis);
    let omega_j = dm.inputs.omega[axis];
    let (b, bd) = (b_idx(axis), bd_idx(axis));

    let decomposition = eigen(&dm.m0).ok().filter(|e| to_f64(e.condition) < 1e12);
    if let Some(e) = decomposition {
        let c0 = &e.inverse * &u0;
        let terms: Vec<LorentzianTerm<T>> = (0..DIM)
            .map(|l| LorentzianTerm {
                pole: e.values[l],
                weight: c0[l] * (e.vectors[(b, l)] + e.vectors[(bd, l)]) * scale,
            })
            .collect();
        let s = grid.iter().map(|&w| terms.iter().fold(T::zero(), |a, t| a + t.eval(w))).collect();
        let main = main_peak(&terms, omega_j);
        let (fwhm_main, peak_center) = match main {
            Some(i) => (terms[i].pole.re.abs() * lit(2.0), -terms[i].pole.im),
            None => (T::zero(), omega_j),
        };
        let span = (fwhm_main * lit(10.0)).max(omega_j * lit(1e-6));
        let eval = |w: T| Ok(terms.iter().fold(T::zero(), |a, t| a + t.eval(w)));
        let (fwhm_numeric, _) = half_max_width(eval, peak_center, span)?;
        let overlapping = fwhm_main > T::zero()
            && ((fwhm_numeric - fwhm_main) / fwhm_main).abs() > lit(OVERLAP_TOLERANCE);
        Ok(SpectrumResult {
            axis,
            omega: grid.to_vec(),
            s,
            terms,
            fwhm_main,
            peak_center,
            fwhm_numeric,
            overlapping,
            method: SpectrumMethod::Poles,
        })
    } else {
        let s = grid
            .iter()
            .map(|&w| resolvent_value(&dm.m0, &u0, axis, scale, w))
            .collect::<Result<Vec<T>>>()?;
        let eval = |w: T| resolvent_value(&dm.m0, &u0, axis, scale, w);
        let (w1, c1) = half_max_width(eval, omega_j, omega_j * lit(MAIN_PEAK_WINDOW))?;
        let (fwhm, centre) = half_max_width(eval, c1, (w1 * lit(10.0)).min(omega_j * lit(MAIN_PEAK_WINDOW)))?;
        Ok(SpectrumResult {
            axis,
            omega: grid.to_vec(),
            s,
            terms: Vec::new(),
            fwhm_main: fwhm,
            peak_center: centre,
            fwhm_numeric: fwhm,
            overlapping: false,
            method: SpectrumMethod::Resolvent,
        })
    }
}

/// FWHM of the main peak, rad/s.
pub fn fwhm_main_peak<T: Real>(sr: &SpectrumResult<T>) -> T {
    sr.fwhm_main
}

/// Default grid: 4096 points on `[0, 2 max(Ω′, δ′)]`.
pub fn default_grid<T: Real>(dm: &DriftModel<T>) -> Vec<T> {
    let top = dm.inputs.omega.iter().fold(dm.inputs.delta.abs(), |m, &w| m.max(w)) * lit(2.0);
    let n = 4096;
    (0..n).map(|k| top * lit::<T>(k as f64 / (n - 1) as f64)).collect()
}
