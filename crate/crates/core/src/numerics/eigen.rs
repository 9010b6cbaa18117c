//! Eigendecomposition of general complex matrices.
//!
//! nalgebra's complex Schur form gives `M = Q T Qᴴ` with `T` upper triangular;
//! eigenvectors of `T` follow by back substitution.

use nalgebra::{DMatrix, DVector, Schur};

use crate::error::{Error, Result};
use crate::scalar::{cabs, cplx, lit, Cplx, Real};

/// `M = V diag(λ) V⁻¹`.
#[derive(Debug, Clone)]
pub struct Eigen<T: Real> {
    pub values: DVector<Cplx<T>>,
    pub vectors: DMatrix<Cplx<T>>,
    pub inverse: DMatrix<Cplx<T>>,
    /// ‖V‖_F ‖V⁻¹‖_F, an upper estimate of the 2-norm condition number.
    pub condition: T,
}

/// Eigenvalues only.
pub fn eigenvalues<T: Real>(m: &DMatrix<Cplx<T>>) -> Result<DVector<Cplx<T>>> {
    let (_, t) = schur(m)?;
    Ok(t.diagonal())
}

fn schur<T: Real>(m: &DMatrix<Cplx<T>>) -> Result<(DMatrix<Cplx<T>>, DMatrix<Cplx<T>>)> {
    if m.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::Singular("non-finite matrix entry".into()));
    }
    let s = Schur::try_new(m.clone(), T::eps(), 10_000)
        .ok_or_else(|| Error::Singular("Schur iteration did not converge".into()))?;
    Ok(s.unpack())
}

/// Full eigendecomposition. Fails if the eigenvector matrix is singular.
pub fn eigen<T: Real>(m: &DMatrix<Cplx<T>>) -> Result<Eigen<T>> {
    let n = m.nrows();
    let (q, t) = schur(m)?;
    let zero = cplx(T::zero(), T::zero());
    let one = cplx(T::one(), T::zero());
    let tnorm = t.iter().fold(T::zero(), |a, z| a.max(cabs(*z)));
    let tiny = T::eps() * tnorm.max(T::min_value().unwrap_or(T::zero()));
    let mut y = DMatrix::<Cplx<T>>::from_element(n, n, zero);
    for k in 0..n {
        let lam = t[(k, k)];
        y[(k, k)] = one;
        for i in (0..k).rev() {
            let mut acc = zero;
            for j in i + 1..=k {
                acc += t[(i, j)] * y[(j, k)];
            }
            let mut den = t[(i, i)] - lam;
            if cabs(den) < tiny {
                den = cplx(tiny.max(T::min_value().unwrap_or(T::eps())), T::zero());
            }
            y[(i, k)] = -acc / den;
        }
    }
    let mut v = q * y;
    for k in 0..n {
        let norm = v.column(k).iter().fold(T::zero(), |a, z| a + z.norm_sqr()).sqrt();
        if norm > T::zero() {
            let inv = T::one() / norm;
            for i in 0..n {
                v[(i, k)] *= inv;
            }
        }
    }
    let inverse = v
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Singular("eigenvector matrix not invertible".into()))?;
    let fro = |a: &DMatrix<Cplx<T>>| a.iter().fold(T::zero(), |s, z| s + z.norm_sqr()).sqrt();
    let condition = fro(&v) * fro(&inverse);
    Ok(Eigen { values: t.diagonal(), vectors: v, inverse, condition })
}

impl<T: Real> Eigen<T> {
    /// `V f(λ) V⁻¹` for a scalar function of the eigenvalues.
    pub fn apply<F: Fn(Cplx<T>) -> Cplx<T>>(&self, f: F) -> DMatrix<Cplx<T>> {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for k in 0..n {
            let fk = f(self.values[k]);
            for i in 0..n {
                scaled[(i, k)] *= fk;
            }
        }
        scaled * &self.inverse
    }

    /// Largest real part.
    pub fn max_real(&self) -> T {
        self.values.iter().fold(lit::<T>(f64::NEG_INFINITY), |m, z| m.max(z.re))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reconstructs_random_matrix() {
        let n = 9;
        let m = DMatrix::<Cplx<f64>>::from_fn(n, n, |i, j| {
            let a = ((i * 7 + j * 3) % 11) as f64 - 5.0;
            let b = ((i * 5 + j * 13) % 7) as f64 - 3.0;
            cplx(a * 0.3, b * 0.2 - if i == j { 1.0 } else { 0.0 })
        });
        let e = eigen(&m).unwrap();
        let back = e.apply(|z| z);
        assert!((back - &m).norm() < 1e-10 * m.norm());
    }

    #[test]
    fn triangular_eigenvalues() {
        let m = DMatrix::<Cplx<f64>>::from_row_slice(
            2,
            2,
            &[cplx(1.0, 2.0), cplx(3.0, 0.0), cplx(0.0, 0.0), cplx(-4.0, 0.5)],
        );
        let mut ev: Vec<_> = eigenvalues(&m).unwrap().iter().map(|z| (z.re, z.im)).collect();
        ev.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        assert!((ev[0].0 + 4.0).abs() < 1e-12 && (ev[0].1 - 0.5).abs() < 1e-12);
        assert!((ev[1].0 - 1.0).abs() < 1e-12 && (ev[1].1 - 2.0).abs() < 1e-12);
    }
}
