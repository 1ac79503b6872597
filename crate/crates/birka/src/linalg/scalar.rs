use super::c64;
use std::fmt::Debug;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

/// Field element used by the generic kernels: `f64` or [`c64`].
pub trait Scalar:
    faer::traits::ComplexField
    + Copy
    + Debug
    + PartialEq
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + Mul<f64, Output = Self>
    + 'static
{
    const IS_REAL: bool;
    fn zero() -> Self;
    fn one() -> Self;
    fn from_real(x: f64) -> Self;
    fn modulus(self) -> f64;
    fn abs_sq(self) -> f64;
    fn to_c64(self) -> c64;
    fn conjugate(self) -> Self;
    fn finite(self) -> bool;
}

impl Scalar for f64 {
    const IS_REAL: bool = true;
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_real(x: f64) -> Self {
        x
    }
    fn modulus(self) -> f64 {
        self.abs()
    }
    fn abs_sq(self) -> f64 {
        self * self
    }
    fn to_c64(self) -> c64 {
        c64::new(self, 0.0)
    }
    fn conjugate(self) -> Self {
        self
    }
    fn finite(self) -> bool {
        self.is_finite()
    }
}

impl Scalar for c64 {
    const IS_REAL: bool = false;
    fn zero() -> Self {
        c64::new(0.0, 0.0)
    }
    fn one() -> Self {
        c64::new(1.0, 0.0)
    }
    fn from_real(x: f64) -> Self {
        c64::new(x, 0.0)
    }
    fn modulus(self) -> f64 {
        self.norm()
    }
    fn abs_sq(self) -> f64 {
        self.norm_sqr()
    }
    fn to_c64(self) -> c64 {
        self
    }
    fn conjugate(self) -> Self {
        self.conj()
    }
    fn finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}
