//! Cauchy principal values of ∫₀^K kⁿ/(k − a) dk in closed form.

use crate::scalar::Real;

/// PV ∫₀^K kⁿ/(k − a) dk for a > 0, K > 0, K ≠ a.
///
/// Long division gives kⁿ/(k−a) = Σ_{m<n} a^{n−1−m} k^m + aⁿ/(k−a); the
/// polynomial part integrates exactly and the remainder contributes
/// aⁿ ln|(K − a)/a|.
pub fn pv_power_integral<T: Real>(n: u32, a: T, cutoff: T) -> T {
    let mut poly = T::zero();
    let mut a_pow = T::one();
    // Accumulate from the highest power of K down so a^{n-1-m} builds up.
    for m in (0..n).rev() {
        let m1 = T::from_u32(m + 1).unwrap();
        poly += a_pow * cutoff.powi(m as i32 + 1) / m1;
        a_pow *= a;
    }
    poly + a_pow * ((cutoff - a).abs() / a).ln()
}

/// PV ∫₀^K k³/(k − k₀) dk.
pub fn pv_cubic_integral<T: Real>(k0: T, cutoff: T) -> T {
    pv_power_integral(3, k0, cutoff)
}

/// PV ∫₀^K k⁵/(k − k₀) dk.
pub fn pv_quintic_integral<T: Real>(k0: T, cutoff: T) -> T {
    pv_power_integral(5, k0, cutoff)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_at_twice_the_pole() {
        let k0 = 3.7_f64;
        let v = pv_cubic_integral(k0, 2.0 * k0);
        assert!((v / (20.0 * k0.powi(3) / 3.0) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn non_log_part_at_pole() {
        // With K = k0 the polynomial part alone is k0³(1/3 + 1/2 + 1).
        let k0 = 2.0_f64;
        let k = 1.0 + 1e-9;
        let v = pv_cubic_integral(k0, k0 * k);
        let log_part = k0.powi(3) * (k - 1.0_f64).ln();
        assert!(((v - log_part) / (k0.powi(3) * (1.0 / 3.0 + 0.5 + 1.0)) - 1.0).abs() < 1e-7);
    }

    #[test]
    fn f32_agrees_with_f64() {
        let a = pv_quintic_integral(4.0_f64, 9.0);
        let b = pv_quintic_integral(4.0_f32, 9.0) as f64;
        assert!((a - b).abs() / a.abs() < 1e-5);
    }
}
