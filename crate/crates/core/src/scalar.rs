//! Scalar abstraction shared by every numerical routine in the crate.

use nalgebra::{DMatrix, DVector, RealField};
use num_complex::Complex;
use num_traits::{FloatConst, FromPrimitive, ToPrimitive};

/// Real floating-point type the library is generic over (`f32` or `f64`).
///
/// Complex quantities are always `Complex<T>` built on top of it.
pub trait Real:
    RealField + Copy + FromPrimitive + ToPrimitive + FloatConst + Send + Sync + 'static
{
    /// Converts an `f64` literal, rounding when `Self` is narrower.
    fn lit(x: f64) -> Self;

    /// Lossy conversion to `f64` for reporting.
    fn as_f64(self) -> f64;
}

impl Real for f32 {
    #[inline]
    fn lit(x: f64) -> Self {
        x as f32
    }
    #[inline]
    fn as_f64(self) -> f64 {
        self as f64
    }
}

impl Real for f64 {
    #[inline]
    fn lit(x: f64) -> Self {
        x
    }
    #[inline]
    fn as_f64(self) -> f64 {
        self
    }
}

pub type Cplx<T> = Complex<T>;
pub type CMatrix<T> = DMatrix<Complex<T>>;
pub type CVector<T> = DVector<Complex<T>>;

#[inline]
pub(crate) fn to_c<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

/// Absolute value of a real scalar.
#[inline]
pub(crate) fn rabs<T: Real>(x: T) -> T {
    if x < T::zero() {
        -x
    } else {
        x
    }
}

/// Frobenius norm of a complex matrix.
pub(crate) fn frobenius<T: Real>(m: &CMatrix<T>) -> T {
    m.iter()
        .fold(T::zero(), |acc, z| acc + z.re * z.re + z.im * z.im)
        .sqrt()
}

/// n! as a real scalar.
pub(crate) fn factorial<T: Real>(n: usize) -> T {
    (1..=n).fold(T::one(), |acc, k| acc * T::lit(k as f64))
}

/// Binomial coefficient C(n, k) as a real scalar.
pub(crate) fn binomial<T: Real>(n: usize, k: usize) -> T {
    if k > n {
        return T::zero();
    }
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    T::lit(acc.round())
}

/// Modulus of a complex scalar.
#[inline]
pub(crate) fn cabs<T: Real>(z: &Complex<T>) -> T {
    (z.re * z.re + z.im * z.im).sqrt()
}
