use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

/// Coefficient field (or ring) for frame-algebra calculus.
///
/// Implemented for `Complex64` (floating point), for the exact complex surds in
/// [`crate::conic_lift::exact`], and for the Laurent–Fourier ring used on the
/// conic total space.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn imag_unit() -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn conj(&self) -> Self;
    /// Exact zero test; floating coefficients are only pruned when exactly zero.
    fn is_zero(&self) -> bool;
    /// A size used for residual reporting (max-abs style).
    fn magnitude(&self) -> f64;

    fn from_int(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn imag_unit() -> Self {
        Complex64::new(0.0, 1.0)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Complex64::new(num as f64 / den as f64, 0.0)
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn magnitude(&self) -> f64 {
        self.re.abs().max(self.im.abs())
    }
}

/// `t + conj(t)`: the realification used when turning complex presentations
/// into real tensors.
pub fn realify<C: Scalar>(t: &C) -> C {
    t.clone() + t.conj()
}
