//! Scalar abstractions: real fields for the analysis machinery and
//! matrix entries (real or complex) for transfer-matrix products.

use num_complex::Complex;
use num_traits::{Float, FromPrimitive, ToPrimitive};
use std::fmt::{Debug, Display};
use std::iter::Sum;

/// Real scalar used throughout the analysis layer: f32 or f64.
pub trait Real:
    Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + Send + Sync + 'static
{
    /// Shorthand for lossy conversion from f64 constants.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 converts to any Real")
    }
}

impl<T> Real for T where
    T: Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + Send + Sync + 'static
{
}

/// Entry type of 2x2 transfer matrices. Real (f32, f64) or complex
/// (Complex<f32>, Complex<f64>) scalars over an underlying [`Real`] field.
pub trait MatScalar:
    Copy
    + PartialEq
    + Debug
    + Send
    + Sync
    + 'static
    + std::ops::Add<Output = Self>
    + std::ops::Sub<Output = Self>
    + std::ops::Mul<Output = Self>
    + std::ops::Neg<Output = Self>
{
    type R: Real;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_real(r: Self::R) -> Self;
    /// |z|^2, exact for real scalars.
    fn modulus_sq(self) -> Self::R;
    /// Divide by a positive real (renormalization step).
    fn div_real(self, r: Self::R) -> Self;
}

macro_rules! impl_mat_scalar_real {
    ($t:ty) => {
        impl MatScalar for $t {
            type R = $t;

            fn zero() -> Self {
                0.0
            }
            fn one() -> Self {
                1.0
            }
            fn from_real(r: Self::R) -> Self {
                r
            }
            fn modulus_sq(self) -> Self::R {
                self * self
            }
            fn div_real(self, r: Self::R) -> Self {
                self / r
            }
        }
    };
}

impl_mat_scalar_real!(f32);
impl_mat_scalar_real!(f64);

macro_rules! impl_mat_scalar_complex {
    ($t:ty) => {
        impl MatScalar for Complex<$t> {
            type R = $t;

            fn zero() -> Self {
                Complex::new(0.0, 0.0)
            }
            fn one() -> Self {
                Complex::new(1.0, 0.0)
            }
            fn from_real(r: Self::R) -> Self {
                Complex::new(r, 0.0)
            }
            fn modulus_sq(self) -> Self::R {
                self.re * self.re + self.im * self.im
            }
            fn div_real(self, r: Self::R) -> Self {
                Complex::new(self.re / r, self.im / r)
            }
        }
    };
}

impl_mat_scalar_complex!(f32);
impl_mat_scalar_complex!(f64);
