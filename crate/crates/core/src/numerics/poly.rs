//! Dense real polynomials and companion-matrix root finding.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;

use crate::scalar::{cabs, cplx, lit, Cplx, Real};

/// Polynomial with real coefficients in ascending order.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly<T: Real> {
    pub coeffs: Vec<T>,
}

impl<T: Real> Poly<T> {
    pub fn new(coeffs: Vec<T>) -> Self {
        Poly { coeffs }
    }

    pub fn constant(c: T) -> Self {
        Poly { coeffs: vec![c] }
    }

    /// `c0 + c1 x`.
    pub fn linear(c0: T, c1: T) -> Self {
        Poly { coeffs: vec![c0, c1] }
    }

    pub fn scale(&self, s: T) -> Self {
        Poly { coeffs: self.coeffs.iter().map(|&c| c * s).collect() }
    }

    pub fn eval(&self, x: T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, &c| acc * x + c)
    }

    pub fn eval_complex(&self, z: Cplx<T>) -> Cplx<T> {
        self.coeffs.iter().rev().fold(cplx(T::zero(), T::zero()), |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Poly::constant(T::zero());
        }
        Poly {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * T::from_usize(k).unwrap())
                .collect(),
        }
    }

    /// Sum of |c_k| |x|^k, the scale against which rounding in `eval` is judged.
    pub fn magnitude(&self, x: T) -> T {
        let ax = x.abs();
        self.coeffs.iter().rev().fold(T::zero(), |acc, &c| acc * ax + c.abs())
    }

    /// Degree ignoring exactly-zero leading coefficients.
    pub fn degree(&self) -> usize {
        self.coeffs.iter().rposition(|c| *c != T::zero()).unwrap_or(0)
    }

    /// All complex roots via eigenvalues of the companion matrix, each polished
    /// by Newton iteration on the polynomial itself.
    pub fn roots(&self) -> Vec<Cplx<T>> {
        let d = self.degree();
        if d == 0 {
            return Vec::new();
        }
        let lead = self.coeffs[d];
        let monic: Vec<T> = self.coeffs[..d].iter().map(|&c| c / lead).collect();
        // Balance with x = s t so the scaled roots are O(1).
        let s = (0..d).fold(T::zero(), |m: T, k| {
            m.max(monic[k].abs().powf(T::one() / lit::<T>((d - k) as f64)))
        });
        let s = if s > T::zero() { s } else { T::one() };
        let mut comp = DMatrix::<T>::zeros(d, d);
        for i in 1..d {
            comp[(i, i - 1)] = T::one();
        }
        for k in 0..d {
            // coefficient of t^k after scaling: monic[k] / s^(d-k)
            comp[(k, d - 1)] = -monic[k] / s.powi((d - k) as i32);
        }
        let eig = comp.complex_eigenvalues();
        let deriv = self.derivative();
        eig.iter()
            .map(|&t| {
                let z = cplx(t.re * s, t.im * s);
                self.polish(&deriv, z)
            })
            .collect()
    }

    fn polish(&self, deriv: &Poly<T>, mut z: Cplx<T>) -> Cplx<T> {
        let mut best = cabs(self.eval_complex(z));
        for _ in 0..50 {
            let f = self.eval_complex(z);
            let df = deriv.eval_complex(z);
            if cabs(df) == T::zero() {
                break;
            }
            let step = f / df;
            let cand = z - step;
            let fc = cabs(self.eval_complex(cand));
            if !(fc < best) {
                break;
            }
            best = fc;
            z = cand;
            if cabs(step) <= T::eps() * cabs(z) {
                break;
            }
        }
        z
    }

    /// Real roots, snapped to the real axis and polished.
    ///
    /// Lengths are measured in units of the largest root modulus `s`; a root
    /// counts as real when |Im| < tol·max(|Re|, tol·s) in those units.
    pub fn real_roots(&self, tol: T) -> Vec<T> {
        let roots = self.roots();
        let scale = roots.iter().fold(T::zero(), |m, z| m.max(cabs(*z)));
        let scale = if scale > T::zero() { scale } else { T::one() };
        let deriv = self.derivative();
        let mut out: Vec<T> = roots
            .into_iter()
            .filter(|z| {
                let re = z.re / scale;
                let im = z.im / scale;
                im.abs() < tol * tol.max(re.abs())
            })
            .map(|z| self.polish_real(&deriv, z.re))
            .collect();
        out.sort_by(|a, b| a.partial_cmp(b).unwrap());
        out
    }

    fn polish_real(&self, deriv: &Poly<T>, mut x: T) -> T {
        let mut best = self.eval(x).abs();
        for _ in 0..50 {
            let df = deriv.eval(x);
            if df == T::zero() {
                break;
            }
            let cand = x - self.eval(x) / df;
            let fc = self.eval(cand).abs();
            if !(fc < best) {
                break;
            }
            best = fc;
            x = cand;
        }
        x
    }
}

impl<T: Real> Add for &Poly<T> {
    type Output = Poly<T>;
    fn add(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let get = |p: &Poly<T>, k: usize| p.coeffs.get(k).copied().unwrap_or_else(T::zero);
        Poly { coeffs: (0..n).map(|k| get(self, k) + get(rhs, k)).collect() }
    }
}

impl<T: Real> Neg for &Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        self.scale(-T::one())
    }
}

impl<T: Real> Sub for &Poly<T> {
    type Output = Poly<T>;
    fn sub(self, rhs: &Poly<T>) -> Poly<T> {
        self + &(-rhs)
    }
}

impl<T: Real> Mul for &Poly<T> {
    type Output = Poly<T>;
    fn mul(self, rhs: &Poly<T>) -> Poly<T> {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return Poly::constant(T::zero());
        }
        let mut c = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly { coeffs: c }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn from_roots(roots: &[f64]) -> Poly<f64> {
        roots.iter().fold(Poly::constant(1.0), |p, &r| &p * &Poly::linear(-r, 1.0))
    }

    #[test]
    fn quintic_real_roots() {
        let p = from_roots(&[-3.0, -0.5, 0.25, 2.0, 7.0]);
        let r = p.real_roots(1e-8);
        let want = [-3.0, -0.5, 0.25, 2.0, 7.0];
        assert_eq!(r.len(), 5);
        for (a, b) in r.iter().zip(want) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn complex_pair_filtered() {
        // (x^2 + 1)(x - 2)
        let p = &Poly::new(vec![1.0, 0.0, 1.0]) * &Poly::linear(-2.0, 1.0);
        let r = p.real_roots(1e-8);
        assert_eq!(r.len(), 1);
        assert!((r[0] - 2.0f64).abs() < 1e-14);
    }

    #[test]
    fn widely_spread_roots() {
        let p = from_roots(&[1e-3, 4.0e5, -2.0e11]);
        let r = p.real_roots(1e-8);
        assert_eq!(r.len(), 3);
        assert!((r[1] - 1e-3).abs() < 1e-15);
    }

    #[test]
    fn f32_roots() {
        let p: Poly<f32> = Poly::new(vec![-6.0, 11.0, -6.0, 1.0]);
        let r = p.real_roots(1e-4);
        assert_eq!(r.len(), 3);
        assert!((r[2] - 3.0).abs() < 1e-4);
    }
}
