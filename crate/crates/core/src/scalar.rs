//! Scalar abstraction for the numerical kernels.
//!
//! Kernels that only see rates (rad/s) and dimensionless numbers are generic
//! over [`Real`], so they run in `f32` as well as `f64`. Coefficient
//! derivation in SI units stays in `f64`: quantities like ħ² underflow `f32`.

use std::fmt::{Debug, Display, LowerExp};

use nalgebra::RealField;
use num_complex::Complex;
use num_traits::{FromPrimitive, ToPrimitive};

/// Floating-point type usable by the generic kernels.
pub trait Real:
    RealField + Copy + FromPrimitive + ToPrimitive + Debug + Display + LowerExp + Send + Sync
{
    /// Machine epsilon.
    fn eps() -> Self;
}

impl Real for f32 {
    fn eps() -> Self {
        f32::EPSILON
    }
}

impl Real for f64 {
    fn eps() -> Self {
        f64::EPSILON
    }
}

/// Converts an `f64` literal into `T`.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("literal representable in scalar type")
}

/// Converts `T` back to `f64`.
#[inline]
pub fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Complex number over `T`.
pub type Cplx<T> = Complex<T>;

#[inline]
pub fn cplx<T: Real>(re: T, im: T) -> Cplx<T> {
    Complex::new(re, im)
}

/// Modulus of a complex number without requiring `num_traits::Float`.
#[inline]
pub fn cabs<T: Real>(z: Cplx<T>) -> T {
    z.re.hypot(z.im)
}

/// Complex exponential.
#[inline]
pub fn cexp<T: Real>(z: Cplx<T>) -> Cplx<T> {
    let m = z.re.exp();
    cplx(m * z.im.cos(), m * z.im.sin())
}

/// Casts a complex number between scalar types.
#[inline]
pub fn ccast<T: Real>(z: Complex<f64>) -> Cplx<T> {
    cplx(lit(z.re), lit(z.im))
}
