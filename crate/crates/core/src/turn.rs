//! Fixed-point angles measured in full turns.
//!
//! A [`Turn`] stores `x mod 1` as a 64-bit binary fraction. Integer
//! multiples wrap exactly, which keeps `n·θ mod 1` free of the drift that
//! floating multiplication introduces once `n` is large.

use crate::scalar::Real;
use num_complex::Complex;
use std::ops::{Add, Neg, Sub};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Turn(pub u64);

const SCALE: f64 = 18446744073709551616.0; // 2^64

impl Turn {
    pub const ZERO: Turn = Turn(0);

    /// Nearest fixed-point angle to `x mod 1`.
    ///
    /// Exact for every `f64` in `[0, 1)` whose binary expansion stops at
    /// or above `2^-64`, which covers all multiples of `2^-53`.
    pub fn from_f64(x: f64) -> Turn {
        let f = x - x.floor();
        let scaled = (f * SCALE).round();
        if scaled >= SCALE {
            Turn(0)
        } else {
            Turn(scaled as u64)
        }
    }

    pub fn from_real<T: Real>(x: T) -> Turn {
        Turn::from_f64(x.as_f64())
    }

    /// `j / m` rounded to the fixed-point grid.
    pub fn from_ratio(j: u64, m: u64) -> Turn {
        assert!(m > 0, "denominator must be positive");
        let j = j % m;
        let v = ((j as u128) << 64) / m as u128;
        let rem = ((j as u128) << 64) % m as u128;
        let v = if 2 * rem >= m as u128 { v + 1 } else { v };
        Turn(v as u64)
    }

    pub fn times(self, n: i64) -> Turn {
        Turn(self.0.wrapping_mul(n as u64))
    }

    pub fn times_i128(self, n: i128) -> Turn {
        Turn(self.0.wrapping_mul(n as u64))
    }

    /// Value in `[0, 1)`.
    pub fn to_unit_interval(self) -> f64 {
        self.0 as f64 / SCALE
    }

    /// Signed representative in `[-1/2, 1/2)`.
    pub fn centered<T: Real>(self) -> T {
        T::of_i64(self.0 as i64) / T::of(SCALE)
    }

    /// `e(self)`. Negation maps to exact conjugation.
    pub fn unit<T: Real>(self) -> Complex<T> {
        let (s, c) = (T::TAU() * self.centered::<T>()).sin_cos();
        Complex::new(c, s)
    }

    pub fn cos<T: Real>(self) -> T {
        (T::TAU() * self.centered::<T>()).cos()
    }
}

impl Add for Turn {
    type Output = Turn;
    fn add(self, o: Turn) -> Turn {
        Turn(self.0.wrapping_add(o.0))
    }
}

impl Sub for Turn {
    type Output = Turn;
    fn sub(self, o: Turn) -> Turn {
        Turn(self.0.wrapping_sub(o.0))
    }
}

impl Neg for Turn {
    type Output = Turn;
    fn neg(self) -> Turn {
        Turn(self.0.wrapping_neg())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dyadic_values_are_exact() {
        assert_eq!(Turn::from_f64(0.5), Turn(1 << 63));
        assert_eq!(Turn::from_f64(1.25), Turn(1 << 62));
        assert_eq!(Turn::from_f64(-0.25), Turn(3 << 62));
        assert_eq!(Turn::from_ratio(1, 4), Turn(1 << 62));
    }

    #[test]
    fn negation_conjugates() {
        let t = Turn::from_f64(0.123456789);
        let a: Complex<f64> = t.unit();
        let b: Complex<f64> = (-t).unit();
        assert_eq!(a.re, b.re);
        assert_eq!(a.im, -b.im);
    }

    #[test]
    fn multiples_wrap_exactly() {
        let t = Turn::from_ratio(1, 3);
        assert_eq!(t.times(3).0.min(t.times(3).0.wrapping_neg()), 1);
        assert_eq!(Turn::from_f64(0.75).times(4), Turn::ZERO);
    }
}
