use super::{ConfracError, PartialQuotients, Source, Tail};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact expansion of a non-negative rational, in canonical form (the last
/// quotient is at least 2 unless the number is an integer).
pub fn expand_rational(x: &BigRational) -> Result<PartialQuotients, ConfracError> {
    if x.is_negative() {
        return Err(ConfracError::InvalidInput("negative input".into()));
    }
    let (mut num, mut den) = (x.numer().clone(), x.denom().clone());
    let mut a = Vec::new();
    while !den.is_zero() {
        let q = &num / &den;
        let r = &num - &q * &den;
        a.push(q.to_biguint().expect("non-negative"));
        num = std::mem::replace(&mut den, r);
    }
    PartialQuotients::new(a, Source::FloatExpanded, Tail::Exact)
}

/// Gauss-map expansion of `x` known to `precision_bits` fractional bits.
///
/// `x` is first rounded to the `2^-precision_bits` grid. If that rounding
/// is exact the expansion is exact as well; otherwise `x` is only known
/// within `±2^-precision_bits` and a quotient is emitted only when every
/// point of the uncertainty interval agrees on it. Returns quotients
/// `a_0..=a_{k_max}`, or fewer when a rational input terminates. Running
/// out of certified quotients first yields `PrecisionExhausted` carrying
/// the certified prefix.
pub fn expand_real(
    x: &BigRational,
    k_max: usize,
    precision_bits: u64,
) -> Result<PartialQuotients, ConfracError> {
    if x.is_negative() {
        return Err(ConfracError::InvalidInput("negative input".into()));
    }
    let scale = BigRational::from_integer(BigInt::one() << precision_bits);
    let scaled = x * &scale;
    let grid = scaled.round();
    let exact = scaled.is_integer();
    let center = grid / &scale;
    let radius = if exact {
        BigRational::zero()
    } else {
        BigRational::one() / &scale
    };
    let mut lo = &center - &radius;
    let mut hi = &center + &radius;
    if lo.is_negative() {
        lo = BigRational::zero();
    }

    let mut a: Vec<BigUint> = Vec::new();
    let exhausted = |a: Vec<BigUint>| -> ConfracError {
        let certified = a.len();
        let prefix = if a.is_empty() {
            PartialQuotients::new(vec![BigUint::zero()], Source::FloatExpanded, Tail::Open)
        } else {
            PartialQuotients::new(a, Source::FloatExpanded, Tail::Open)
        };
        ConfracError::PrecisionExhausted { certified, prefix: Box::new(prefix.expect("valid prefix")) }
    };

    loop {
        let f = lo.floor();
        if f != hi.floor() {
            return Err(exhausted(a));
        }
        a.push(f.to_integer().to_biguint().expect("non-negative"));
        if a.len() > k_max {
            return PartialQuotients::new(a, Source::FloatExpanded, Tail::Open);
        }
        let r_lo = &lo - &f;
        let r_hi = &hi - &f;
        if r_lo.is_zero() {
            if r_hi.is_zero() {
                return PartialQuotients::new(a, Source::FloatExpanded, Tail::Exact);
            }
            // the next complete quotient is unbounded over the interval
            return Err(exhausted(a));
        }
        lo = r_hi.recip();
        hi = r_lo.recip();
    }
}
