//! Scalar abstraction shared by the floating-point parts of the crate.

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use std::fmt::{Debug, Display};

/// Floating point scalar: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossy conversion from `f64`.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 is representable in every Real")
    }

    /// Lossy conversion from a signed integer.
    fn of_i64(n: i64) -> Self {
        Self::from_i64(n).expect("i64 is representable in every Real")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("Real converts to f64")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Fractional part in `[0, 1)`.
pub fn frac<T: Real>(x: T) -> T {
    let f = x - x.floor();
    // x slightly below an integer can round up to exactly 1
    if f >= T::one() {
        T::zero()
    } else {
        f
    }
}

/// The additive character `e(x) = exp(2πix)`.
///
/// The argument is reduced to `[-1/2, 1/2]` before scaling, so large
/// integer parts do not leak into the rounding of the angle.
pub fn unit<T: Real>(x: T) -> Complex<T> {
    let r = x - x.round();
    let (s, c) = (T::TAU() * r).sin_cos();
    Complex::new(c, s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_of_integers_is_one() {
        for n in -5..=5 {
            let z = unit(n as f64);
            assert_eq!(z.re, 1.0);
            assert_eq!(z.im, 0.0);
        }
    }

    #[test]
    fn unit_quarter_turn() {
        let z = unit(0.25f64);
        assert!(z.re.abs() < 1e-16);
        assert!((z.im - 1.0).abs() < 1e-16);
        let w = unit(0.25f32);
        assert!((w.im - 1.0).abs() < 1e-6);
    }

    #[test]
    fn frac_stays_below_one() {
        assert_eq!(frac(-1e-20f64), 0.0);
        assert_eq!(frac(2.75f64), 0.75);
        assert_eq!(frac(-0.25f64), 0.75);
    }
}
