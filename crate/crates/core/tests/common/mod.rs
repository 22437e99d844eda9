//! Independent big-integer oracles shared by the integration tests.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

/// `⌊2^bits / x⌋`-scaled `atan(1/x)`.
fn atan_inv(x: u64, bits: u64) -> BigInt {
    let one = BigInt::one() << bits;
    let x2 = BigInt::from(x * x);
    let mut power = &one / BigInt::from(x);
    let mut sum = power.clone();
    let mut k = 1u64;
    while !power.is_zero() {
        power = &power / &x2;
        let term = &power / BigInt::from(2 * k + 1);
        if k % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
        k += 1;
    }
    sum
}

/// `π·2^bits` to within a few units, by Machin's formula.
pub fn pi_fixed(bits: u64) -> BigInt {
    let g = bits + 32;
    let pi = BigInt::from(16) * atan_inv(5, g) - BigInt::from(4) * atan_inv(239, g);
    pi >> 32
}

/// Quotients of `num/den` by Euclid's algorithm.
pub fn euclid(num: &BigInt, den: &BigInt) -> Vec<BigInt> {
    let (mut a, mut b) = (num.clone(), den.clone());
    let mut out = Vec::new();
    while !b.is_zero() {
        let (q, r) = a.div_mod_floor(&b);
        out.push(q);
        a = std::mem::replace(&mut b, r);
    }
    out
}

/// `J_l(x)` from its power series, with `x = x_fixed / 2^bits`.
pub fn bessel_series(l: i64, x_fixed: &BigInt, bits: u64) -> f64 {
    let n = l.unsigned_abs();
    let sign = if l < 0 && n % 2 == 1 { -1.0 } else { 1.0 };
    let one = BigInt::one() << bits;
    let half_x = x_fixed >> 1;
    // (x/2)^n / n!
    let mut term = one.clone();
    for k in 1..=n {
        term = ((&term * &half_x) >> bits) / BigInt::from(k);
    }
    let q = (&half_x * &half_x) >> bits;
    let mut sum = BigInt::zero();
    let mut m = 0u64;
    while !term.is_zero() {
        if m.is_multiple_of(2) {
            sum += &term;
        } else {
            sum -= &term;
        }
        m += 1;
        term = ((&term * &q) >> bits) / BigInt::from(m * (m + n));
    }
    sign * fixed_to_f64(&sum, bits)
}

pub fn fixed_to_f64(v: &BigInt, bits: u64) -> f64 {
    let shift = bits.saturating_sub(60);
    let top = (v >> shift).to_f64().unwrap();
    top * 2f64.powi(-((bits - shift) as i32))
}

/// `⌊e^q⌋` from the exponential series in exact rationals.
pub fn floor_exp(q: u64) -> BigInt {
    // Σ_{k≤K} q^k/k! = num/den; the omitted tail is below 1 once K ≫ q
    let kmax = 4 * q + 40;
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    let mut term_num = BigInt::one();
    for k in 0..=kmax {
        if k > 0 {
            term_num *= BigInt::from(q);
            den_mul(&mut num, &mut den, k);
        }
        num += &term_num;
    }
    num.div_floor(&den)
}

fn den_mul(num: &mut BigInt, den: &mut BigInt, k: u64) {
    *num *= BigInt::from(k);
    *den *= BigInt::from(k);
}
