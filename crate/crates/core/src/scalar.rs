//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Real floating-point type the solvers are generic over (`f32` or `f64`).
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal; every `Real` can represent it approximately.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Converts a count or index.
    #[inline]
    fn idx(n: usize) -> Self {
        Self::from_usize(n).expect("index representable")
    }

    /// Converts a small signed integer (spin weight, azimuthal number).
    #[inline]
    fn int(n: i64) -> Self {
        Self::from_i64(n).expect("integer representable")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex number over a [`Real`] scalar.
pub type Cx<T> = Complex<T>;

/// Builds a complex number from two `f64` components.
#[inline]
pub fn cx<T: Real>(re: f64, im: f64) -> Cx<T> {
    Complex::new(T::lit(re), T::lit(im))
}

/// Lifts a real scalar into the complex plane.
#[inline]
pub fn real<T: Real>(x: T) -> Cx<T> {
    Complex::new(x, T::zero())
}

/// The imaginary unit.
#[inline]
pub fn imag_unit<T: Real>() -> Cx<T> {
    Complex::new(T::zero(), T::one())
}

#[inline]
pub fn is_finite<T: Real>(z: Cx<T>) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Principal square root by the algebraic formula, accurate to about one ulp
/// in each component (the polar form used by `Complex::sqrt` loses a few).
pub fn sqrt<T: Real>(z: Cx<T>) -> Cx<T> {
    if z.re == T::zero() && z.im == T::zero() {
        return z;
    }
    let half = T::lit(0.5);
    let t = ((z.re.abs() + z.re.hypot(z.im)) * half).sqrt();
    if z.re >= T::zero() {
        Complex::new(t, z.im / (t + t))
    } else {
        Complex::new(z.im.abs() / (t + t), t.copysign(z.im))
    }
}

/// `f64` shorthand for [`cx`], convenient where inference has nothing to go on.
#[inline]
pub fn c64(re: f64, im: f64) -> Complex<f64> {
    Complex::new(re, im)
}
