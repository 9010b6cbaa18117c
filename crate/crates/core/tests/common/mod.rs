//! Oracles shared by the oracle and acceptance suites. Each returns the
//! measured discrepancy so callers pick their own tolerance.
#![allow(dead_code)]

use std::f64::consts::PI;

use cscool::analysis::{analytic_occupation, limit_occupation, AnalyticOccInput, OccupationLimit};
use cscool::dynamics::generator::{b_idx, bd_idx, DIM};
use cscool::dynamics::{evolve_at, steady_state, thermal_state, DriftInputs, DriftModel};
use cscool::model::Model;
use cscool::numerics::pv::pv_power_integral;
use cscool::spectra::psd;
use cscool::C64;
use nalgebra::{DMatrix, DVector};
use rustfft::FftPlanner;

pub const TWO_PI: f64 = 2.0 * PI;

pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let n = panels * 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

/// PV ∫₀^K kⁿ/(k − a) dk by pairing points symmetric about the pole.
pub fn pv_quadrature(n: u32, a: f64, cutoff: f64) -> f64 {
    let g = |k: f64| k.powi(n as i32);
    let plain = |lo: f64, hi: f64| simpson(|k| g(k) / (k - a), lo, hi, 20_000);
    if cutoff < a {
        return plain(0.0, cutoff);
    }
    let half = a.min(cutoff - a);
    let paired = simpson(
        |t| if t == 0.0 { 2.0 * n as f64 * a.powi(n as i32 - 1) } else { (g(a + t) - g(a - t)) / t },
        0.0,
        half,
        20_000,
    );
    let rest = if cutoff > 2.0 * a { plain(2.0 * a, cutoff) } else { plain(0.0, a - half) };
    paired + rest
}

/// Largest relative gap between the closed-form PV integrals and quadrature.
pub fn pv_error() -> f64 {
    let mut worst: f64 = 0.0;
    for &n in &[3u32, 5] {
        for &ratio in &[0.3, 0.5, 0.9, 1.2, 1.7, 2.0, 3.5, 10.0] {
            let a = 1.3;
            let exact = pv_power_integral(n, a, ratio * a);
            let quad = pv_quadrature(n, a, ratio * a);
            worst = worst.max((exact - quad).abs() / quad.abs().max(a.powi(n as i32 + 1)));
        }
    }
    worst
}

/// One mechanical axis coupled to the cavity, the others left with a
/// negligible gas friction only.
pub fn single_axis(axis: usize, omega: f64, kappa: f64, g: f64, delta: f64, big: f64) -> DriftModel<f64> {
    let mut gs = [C64::new(0.0, 0.0); 3];
    gs[axis] = C64::new(0.0, g);
    let mut bg = [0.0; 3];
    bg[axis] = big;
    let mut om = [TWO_PI * 120e3, TWO_PI * 140e3, TWO_PI * 40e3];
    om[axis] = omega;
    DriftModel::build(DriftInputs { delta, kappa, omega: om, g: gs, gamma: 1e-6, big_gamma: bg, upsilon: None })
}

/// Closed-form occupation against the full moment steady state on a
/// 5×5×4 (κ, g, δ) grid, for one axis. Returns the worst relative error.
pub fn analytic_grid_error(axis: usize) -> (f64, usize) {
    let w = TWO_PI * 40e3;
    let big = TWO_PI * 100.0;
    let (mut worst, mut count) = (0.0f64, 0);
    for &k in &[0.02, 0.1, 0.5, 1.0, 3.0] {
        for &g in &[0.005, 0.02, 0.05, 0.1, 0.2] {
            for &d in &[0.8, 1.0, 1.1, 1.3] {
                let (k, g, d) = (k * w, g * w, d * w);
                let n = steady_state(&single_axis(axis, w, k, g, d, big)).unwrap().occupation(axis);
                let a = analytic_occupation(&AnalyticOccInput { g, delta: d, gamma: big, kappa: k, omega: w })
                    .unwrap();
                worst = worst.max((a / n - 1.0).abs());
                count += 1;
            }
        }
    }
    (worst, count)
}

/// Relative error of each resolved-sideband limit at a factor-100 separation.
pub fn limit_errors() -> [f64; 3] {
    let w = TWO_PI * 40e3;
    let cases = [
        (OccupationLimit::StrongCoupling, 1e-4, 1e-2),
        (OccupationLimit::Matched, 1e-2, 1e-2),
        (OccupationLimit::WeakCoupling, 1e-2, 1e-4),
    ];
    cases.map(|(lim, k, g)| {
        let i = AnalyticOccInput { g: g * w, delta: w, gamma: 0.1 * k * w, kappa: k * w, omega: w };
        (limit_occupation(&i, lim) / analytic_occupation(&i).unwrap() - 1.0).abs()
    })
}

/// Gap between the steady state and a trajectory run for 60 decay times.
pub fn long_time_gap(m: &Model) -> f64 {
    let ss = m.steady_state().unwrap();
    let margin = m.stability().unwrap().margin;
    let s0 = thermal_state::<f64>(300.0, m.coeffs.omega_prime);
    let late = evolve_at(&m.drift, &s0, &[60.0 / margin]).unwrap().pop().unwrap();
    let scale = ss.second.iter().fold(0.0f64, |a, z| a.max(z.norm()));
    let diff = ss.second.iter().zip(late.second.iter()).fold(0.0f64, |a, (x, y)| a.max((x - y).norm()));
    diff / scale
}

/// Worst Hermiticity violation and most negative relative covariance
/// eigenvalue along a trajectory out to 10⁶ periods of the slowest axis.
pub fn evolution_invariants(m: &Model, t0: f64) -> (f64, f64) {
    let s0 = thermal_state::<f64>(t0, m.coeffs.omega_prime);
    let period = TWO_PI / m.coeffs.omega_prime.iter().cloned().fold(f64::INFINITY, f64::min);
    let times: Vec<f64> = (0..=24).map(|k| period * 10f64.powf(k as f64 / 4.0)).collect();
    let (mut herm, mut neg) = (0.0f64, 0.0f64);
    for st in evolve_at(&m.drift, &s0, &times).unwrap() {
        herm = herm.max(st.hermiticity_violation());
        let scale = (0..3).map(|j| st.occupation(j).abs()).fold(1.0, f64::max);
        neg = neg.min(st.covariance_min_eigenvalue() / scale);
    }
    (herm, neg)
}

// C(τ) = ⟨δq(τ)δq(0)⟩ sampled through a matrix exponential of the drift.
fn sampled_correlation(m: &Model, axis: usize, dt: f64, n: usize) -> Vec<C64> {
    let ss = m.steady_state().unwrap();
    let (b, bd) = (b_idx(axis), bd_idx(axis));
    let mean_q = ss.first[b] + ss.first[bd];
    let mut u = DVector::from_fn(DIM, |k, _| ss.pair(k, b) + ss.pair(k, bd) - ss.first[k] * mean_q);
    let step: DMatrix<C64> = (&m.drift.m0 * C64::new(dt, 0.0)).exp();
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        out.push(u[b] + u[bd]);
        u = &step * &u;
    }
    out
}

/// Largest gap between the pole-sum PSD and the FFT of the sampled
/// correlation within ±3 FWHM of the main peak, relative to the peak value.
/// `dt` must resolve the cavity poles and `n·dt` cover many decay times.
pub fn fft_peak_error(m: &Model, axis: usize, dt: f64, n: usize) -> f64 {
    let r0 = m.params.zero_point[axis];
    let c = sampled_correlation(m, axis, dt, n);
    let mut buf = c.clone();
    FftPlanner::<f64>::new().plan_fft_inverse(n).process(&mut buf);
    let ss = m.steady_state().unwrap();
    let probe = psd(&m.drift, &ss, axis, r0, &[0.0]).unwrap();
    let (centre, width) = (probe.peak_center, probe.fwhm_main);
    let dw = TWO_PI / (n as f64 * dt);
    let k0 = ((centre - 3.0 * width) / dw).ceil() as usize;
    let k1 = ((centre + 3.0 * width) / dw).floor() as usize;
    let grid: Vec<f64> = (k0..=k1).map(|k| k as f64 * dw).collect();
    let sr = psd(&m.drift, &ss, axis, r0, &grid).unwrap();
    let smax = sr.s.iter().cloned().fold(0.0, f64::max);
    (k0..=k1)
        .enumerate()
        .map(|(i, k)| {
            // Trapezoid on [0, ∞) plus the mirrored half.
            let f = (buf[k] - c[0] * 0.5) * dt;
            let s_fft = r0 * r0 / TWO_PI * 2.0 * f.re;
            (s_fft - sr.s[i]).abs() / smax
        })
        .fold(0.0, f64::max)
}

/// `∫S dω / (r0² ⟨δq²⟩) − 1` by trapezoid quadrature over the real line.
pub fn parseval_error(m: &Model, axis: usize) -> f64 {
    let ss = m.steady_state().unwrap();
    let r0 = m.params.zero_point[axis];
    let probe = psd(&m.drift, &ss, axis, r0, &[0.0]).unwrap();
    // Geometric spacing away from every pole.
    let top = 1e4 * m.coeffs.kappa_prime.max(m.coeffs.delta_prime.abs());
    let mut grid: Vec<f64> = (0..=4000).map(|i| top * (i as f64 / 4000.0).powi(3)).collect();
    for t in &probe.terms {
        let (c, w) = (t.pole.im.abs(), t.pole.re.abs().max(1e-3));
        for i in 0..=3000 {
            let off = w * 10f64.powf(-3.0 + 9.0 * i as f64 / 3000.0);
            grid.extend([c - off, c + off].into_iter().filter(|x| *x > 0.0 && *x < top));
        }
    }
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
    grid.dedup();
    let sr = psd(&m.drift, &ss, axis, r0, &grid).unwrap();
    let half: f64 = grid.windows(2).zip(sr.s.windows(2)).map(|(w, s)| 0.5 * (s[0] + s[1]) * (w[1] - w[0])).sum();
    let (b, bd) = (b_idx(axis), bd_idx(axis));
    let mean_q = ss.first[b] + ss.first[bd];
    let q2 = (ss.pair(b, b) + ss.pair(b, bd) + ss.pair(bd, b) + ss.pair(bd, bd) - mean_q * mean_q).re;
    // S is even in ω
    2.0 * half / (r0 * r0 * q2) - 1.0
}

/// Largest relative residual over all displacement roots at several φ.
pub fn displacement_residual() -> f64 {
    let mut worst: f64 = 0.0;
    for phi in [0.0, 0.4, PI / 4.0, 1.2, PI / 2.0] {
        let cfg = cscool::SystemConfig { phi, ..cscool::SystemConfig::reference() };
        for r in &Model::build(&cfg).unwrap().displacements.roots {
            worst = worst.max(r.residuals.max());
        }
    }
    worst
}
