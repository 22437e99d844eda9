//! Binary floating values `m·2^e` with big mantissas and 64-bit exponents,
//! rounded in a caller-chosen direction. Enough to carry certified
//! enclosures of numbers like `e^(-4·10^8)` that no hardware float holds.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rounding {
    Down,
    Up,
}

impl Rounding {
    fn flip(self) -> Rounding {
        match self {
            Rounding::Down => Rounding::Up,
            Rounding::Up => Rounding::Down,
        }
    }
}

/// `man · 2^exp`, normalized so that `man` is odd (or the value is zero).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dyadic {
    man: BigInt,
    exp: i64,
}

fn shift_div(mag: &BigUint, s: u64, up: bool) -> BigUint {
    let q = mag >> s;
    if up && (&q << s) != *mag {
        q + 1u32
    } else {
        q
    }
}

impl Dyadic {
    pub fn zero() -> Dyadic {
        Dyadic { man: BigInt::zero(), exp: 0 }
    }

    pub fn new(man: BigInt, exp: i64) -> Dyadic {
        if man.is_zero() {
            return Dyadic::zero();
        }
        let tz = man.trailing_zeros().unwrap_or(0);
        Dyadic { man: man >> tz, exp: exp + tz as i64 }
    }

    pub fn from_int<I: Into<BigInt>>(n: I) -> Dyadic {
        Dyadic::new(n.into(), 0)
    }

    pub fn from_biguint(n: &BigUint) -> Dyadic {
        Dyadic::new(BigInt::from(n.clone()), 0)
    }

    /// Exact value of a finite `f64`.
    pub fn from_f64(x: f64) -> Dyadic {
        assert!(x.is_finite(), "non-finite value");
        if x == 0.0 {
            return Dyadic::zero();
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let e = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if e == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), e - 1075)
        };
        Dyadic::new(BigInt::from(m) * sign, e)
    }

    pub fn pow2(e: i64) -> Dyadic {
        Dyadic { man: BigInt::one(), exp: e }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.man
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.man.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.man.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.man.is_positive()
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic { man: -self.man.clone(), exp: self.exp }
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic { man: self.man.abs(), exp: self.exp }
    }

    /// Exponent of the leading bit: `2^top ≤ |x| < 2^(top+1)`.
    pub fn top(&self) -> i64 {
        debug_assert!(!self.is_zero());
        self.exp + self.man.bits() as i64 - 1
    }

    /// `x · 2^k`, exact.
    pub fn scale2(&self, k: i64) -> Dyadic {
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic { man: self.man.clone(), exp: self.exp + k }
    }

    /// Keep at most `prec` significant bits, rounding in `dir`.
    pub fn round(&self, prec: u64, dir: Rounding) -> Dyadic {
        let bits = self.man.bits();
        if bits <= prec {
            return self.clone();
        }
        let s = bits - prec;
        let mag = self.man.magnitude();
        let neg = self.man.is_negative();
        // rounding a negative value down means rounding its magnitude up
        let up = (dir == Rounding::Up) != neg;
        let m = shift_div(mag, s, up);
        let m = if neg { -BigInt::from(m) } else { BigInt::from(m) };
        Dyadic::new(m, self.exp + s as i64)
    }

    fn add_exact(&self, o: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(o.exp);
        let a = &self.man << (self.exp - e) as u64;
        let b = &o.man << (o.exp - e) as u64;
        Dyadic::new(a + b, e)
    }

    pub fn add(&self, o: &Dyadic, prec: u64, dir: Rounding) -> Dyadic {
        if self.is_zero() {
            return o.round(prec, dir);
        }
        if o.is_zero() {
            return self.round(prec, dir);
        }
        // When one term sits entirely below the other's lowest set bit it
        // only decides the rounding direction, so replace it by a small
        // stand-in of the same sign instead of materializing a huge shift.
        let (big, small) = if self.top() >= o.top() { (self, o) } else { (o, self) };
        // finer than both the result grid and the lowest bit of `big`
        let g = big.exp.min(big.top() - prec as i64 - 1);
        if small.top() < g - 2 {
            let sticky = Dyadic {
                man: if small.is_negative() { -BigInt::one() } else { BigInt::one() },
                exp: g - 3,
            };
            return big.add_exact(&sticky).round(prec, dir);
        }
        self.add_exact(o).round(prec, dir)
    }

    pub fn sub(&self, o: &Dyadic, prec: u64, dir: Rounding) -> Dyadic {
        self.add(&o.neg(), prec, dir)
    }

    pub fn mul(&self, o: &Dyadic, prec: u64, dir: Rounding) -> Dyadic {
        Dyadic::new(&self.man * &o.man, self.exp + o.exp).round(prec, dir)
    }

    pub fn mul_int(&self, n: &BigInt, prec: u64, dir: Rounding) -> Dyadic {
        Dyadic::new(&self.man * n, self.exp).round(prec, dir)
    }

    /// `1 / x` with `prec` significant bits.
    pub fn recip(&self, prec: u64, dir: Rounding) -> Dyadic {
        assert!(!self.is_zero(), "reciprocal of zero");
        let neg = self.man.is_negative();
        let mag = self.man.magnitude();
        let s = prec + mag.bits() + 2;
        let num = BigUint::one() << s;
        let (q, r) = num.div_rem(mag);
        let up = (dir == Rounding::Up) != neg;
        let q = if up && !r.is_zero() { q + 1u32 } else { q };
        let m = if neg { -BigInt::from(q) } else { BigInt::from(q) };
        Dyadic::new(m, -(s as i64) - self.exp).round(prec, dir)
    }

    pub fn div(&self, o: &Dyadic, prec: u64, dir: Rounding) -> Dyadic {
        // the reciprocal is rounded so that the product moves in `dir`
        let rdir = if self.is_negative() { dir.flip() } else { dir };
        let r = o.recip(prec + 8, rdir);
        self.mul(&r, prec, dir)
    }

    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.man << self.exp as u64
        } else {
            let d = BigInt::one() << (-self.exp) as u64;
            self.man.div_floor(&d)
        }
    }

    /// `round(x · 2^bits) mod 2^bits`, i.e. `x mod 1` on a `bits`-bit grid.
    pub fn frac_fixed(&self, bits: u64) -> BigUint {
        if self.is_zero() || self.exp >= 0 {
            return BigUint::zero();
        }
        let modulus = BigInt::one() << bits;
        let e = self.exp + bits as i64;
        let scaled = if e >= 0 {
            (&self.man << e as u64).mod_floor(&modulus)
        } else {
            let s = (-e) as u64;
            if self.top() < -(bits as i64) - 2 {
                // far below one grid step
                BigInt::zero()
            } else {
                let half = BigInt::one() << (s - 1);
                ((&self.man + half) >> s).mod_floor(&modulus)
            }
        };
        scaled.mod_floor(&modulus).to_biguint().expect("non-negative after mod")
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.man.bits();
        let (m, e) = if bits > 62 {
            let s = bits - 62;
            ((self.man.clone() >> s).to_i64().unwrap(), self.exp + s as i64)
        } else {
            (self.man.to_i64().unwrap(), self.exp)
        };
        let top = e + 62;
        if top < -1140 {
            return 0.0 * m.signum() as f64;
        }
        if top > 1100 {
            return f64::INFINITY * m.signum() as f64;
        }
        let half = e / 2;
        m as f64 * 2f64.powi(half as i32) * 2f64.powi((e - half) as i32)
    }

    /// Natural logarithm of a positive value, to double precision.
    pub fn ln(&self) -> f64 {
        assert!(self.is_positive(), "log of a non-positive value");
        let bits = self.man.bits();
        let s = bits.saturating_sub(60);
        let m = (self.man.magnitude() >> s).to_f64().unwrap();
        m.ln() + (self.exp + s as i64) as f64 * std::f64::consts::LN_2
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, o: &Self) -> Ordering {
        let (sa, sb) = (self.man.sign(), o.man.sign());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == Sign::NoSign {
            return Ordering::Equal;
        }
        let mag = match self.top().cmp(&o.top()) {
            Ordering::Equal => {
                let e = self.exp.min(o.exp);
                let a = self.man.magnitude() << (self.exp - e) as u64;
                let b = o.man.magnitude() << (o.exp - e) as u64;
                a.cmp(&b)
            }
            c => c,
        };
        if sa == Sign::Minus {
            mag.reverse()
        } else {
            mag
        }
    }
}

/// Closed enclosure `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Dyadic,
    pub hi: Dyadic,
}

impl Interval {
    pub fn point(x: Dyadic) -> Interval {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn width(&self, prec: u64) -> Dyadic {
        self.hi.sub(&self.lo, prec, Rounding::Up)
    }

    /// Midpoint, rounded to `prec` bits.
    pub fn mid(&self, prec: u64) -> Dyadic {
        self.lo.add(&self.hi, prec + 1, Rounding::Down).scale2(-1).round(prec, Rounding::Down)
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        &self.lo <= x && x <= &self.hi
    }
}

/// Fixed-point enclosure of `ln 2 · 2^wp`.
fn ln2_fixed(wp: u64) -> (BigUint, BigUint) {
    // ln 2 = Σ_{k≥1} 1/(k·2^k); the terms past k = wp add up to less than one unit
    let mut lo = BigUint::zero();
    let mut hi = BigUint::one();
    for k in 1..=wp {
        let (q, r) = (BigUint::one() << (wp - k)).div_rem(&BigUint::from(k));
        hi += if r.is_zero() { q.clone() } else { &q + 1u32 };
        lo += q;
    }
    (lo, hi)
}

/// Certified enclosure of `e^q` with at least `prec` correct bits.
pub fn exp_int(q: u64, prec: u64) -> Interval {
    if q == 0 {
        return Interval::point(Dyadic::from_int(1));
    }
    let qbits = 64 - q.leading_zeros() as u64;
    let wp = prec + 2 * qbits + 24;
    let (l_lo, l_hi) = ln2_fixed(wp);
    let q_fixed = BigUint::from(q) << wp;
    // q = i·ln2 + r with 0 ≤ r ≲ ln2
    let i = &q_fixed / &l_hi;
    let r_lo = &q_fixed - &i * &l_hi;
    let r_hi = &q_fixed - &i * &l_lo;
    let one = BigUint::one() << wp;
    let series = |r: &BigUint, up: bool| -> BigUint {
        let mut sum = one.clone();
        let mut term = one.clone();
        let mut j = 1u64;
        loop {
            let num = &term * r;
            let den = (BigUint::one() << wp) * BigUint::from(j);
            let (t, rem) = num.div_rem(&den);
            term = if up && !rem.is_zero() { t + 1u32 } else { t };
            if term.is_zero() {
                break;
            }
            sum += &term;
            if up && term <= BigUint::one() {
                break;
            }
            j += 1;
        }
        if up {
            // r < 1 so the remaining terms are bounded by twice the last one
            sum += &term * 2u32 + 2u32;
        }
        sum
    };
    let e_lo = series(&r_lo, false);
    let e_hi = series(&r_hi, true);
    let shift = i.to_i64().expect("exponent fits in i64") - wp as i64;
    Interval {
        lo: Dyadic::new(BigInt::from(e_lo), shift).round(prec + 8, Rounding::Down),
        hi: Dyadic::new(BigInt::from(e_hi), shift).round(prec + 8, Rounding::Up),
    }
}
