//! Scalar abstraction: all core math is generic over the real field.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Real scalar type the whole crate is generic over (`f32` or `f64`).
pub trait Scalar:
    Float + FloatConst + FromPrimitive + NumAssign + Sum + Debug + Display + Send + Sync + 'static
{
}

impl<T> Scalar for T where
    T: Float + FloatConst + FromPrimitive + NumAssign + Sum + Debug + Display + Send + Sync + 'static
{
}

/// Shorthand for converting an `f64` literal into the working scalar.
#[inline]
pub fn real<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("f64 literal representable in scalar type")
}

/// Complex number over the working scalar.
pub type C<T> = Complex<T>;

#[inline]
pub fn c_zero<T: Scalar>() -> C<T> {
    Complex::new(T::zero(), T::zero())
}

#[inline]
pub fn c_one<T: Scalar>() -> C<T> {
    Complex::new(T::one(), T::zero())
}

#[inline]
pub fn c_re<T: Scalar>(x: T) -> C<T> {
    Complex::new(x, T::zero())
}

/// `exp(i phi)`.
#[inline]
pub fn cis<T: Scalar>(phi: T) -> C<T> {
    Complex::new(phi.cos(), phi.sin())
}
