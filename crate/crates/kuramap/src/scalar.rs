//! Scalar abstraction: the numeric kernel is generic over the real field.
//!
//! Everything downstream (operators, series terms, solvers) is written against
//! [`Real`], which in practice means `f32` or `f64`. Concrete aliases for the
//! main types live at the crate root.

use nalgebra::RealField;
use num_traits::{FromPrimitive, ToPrimitive};

/// Real scalar usable throughout the crate: `f32` or `f64`.
pub trait Real: RealField + FromPrimitive + ToPrimitive + Copy {}

impl<T: RealField + FromPrimitive + ToPrimitive + Copy> Real for T {}

/// Convert an `f64` constant (tolerance, literal coefficient) into `T`.
#[inline]
pub fn real<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 constant must be representable in the scalar type")
}

/// Lossy view of a scalar as `f64`, for error payloads and reports.
#[inline]
pub fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}
