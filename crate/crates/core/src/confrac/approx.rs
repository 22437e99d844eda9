//! Certified approximation errors and fractional parts.

use super::dyadic::{exp_int, Dyadic, Interval, Rounding};
use super::{ConfracError, PartialQuotients, Tail};
use crate::turn::Turn;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;

/// Default absolute accuracy requested from [`frac_multiple`].
pub const DEFAULT_EPS: f64 = 1e-12;

/// Guard bits carried on top of the requested precision.
const GUARD: u64 = 64;

/// Enclosure of a complete quotient; `hi = None` stands for +∞.
struct TailBounds {
    lo: Dyadic,
    hi: Option<Dyadic>,
}

/// Enclosure of the complete quotient `α_j = [a_j; a_{j+1}, …]`.
///
/// Uses every stored quotient from `a_j` on, closed off by what the tail
/// kind says about `α_{J+1}`: at least 1 for an open tail, within
/// `(e^{q_J}, e^{q_J} + 2)` for the Liouville rule.
fn tail_bounds(pq: &PartialQuotients, j: usize, wp: u64) -> Result<TailBounds, ConfracError> {
    let a = pq.quotients();
    let last = a.len() - 1;
    let limit = if pq.tail() == Tail::Exact { last } else { last + 1 };
    if j > limit {
        return Err(ConfracError::InsufficientTail { k: j.saturating_sub(1), len: a.len() });
    }
    let (mut bounds, mut i) = match pq.tail() {
        Tail::Exact => {
            let v = Dyadic::from_biguint(&a[last]);
            (TailBounds { lo: v.clone(), hi: Some(v) }, last)
        }
        Tail::Open => (TailBounds { lo: Dyadic::from_int(1), hi: None }, last + 1),
        Tail::Liouville => {
            let q_last = pq.denominators()[last]
                .to_u64()
                .ok_or_else(|| ConfracError::InvalidInput("q_J exceeds 64 bits".into()))?;
            let e = exp_int(q_last, wp);
            let hi = e.hi.add(&Dyadic::from_int(2), wp, Rounding::Up);
            (TailBounds { lo: e.lo, hi: Some(hi) }, last + 1)
        }
    };
    while i > j {
        i -= 1;
        let ai = Dyadic::from_biguint(&a[i]);
        let lo = match &bounds.hi {
            Some(h) => ai.add(&h.recip(wp, Rounding::Down), wp, Rounding::Down),
            None => ai.clone(),
        };
        let hi = ai.add(&bounds.lo.recip(wp, Rounding::Up), wp, Rounding::Up);
        bounds = TailBounds { lo, hi: Some(hi) };
    }
    Ok(bounds)
}

/// Enclosure of `α_j`, or `None` in the upper slot when it is unbounded.
pub fn tail_interval(
    pq: &PartialQuotients,
    j: usize,
    precision_bits: u64,
) -> Result<(Dyadic, Option<Dyadic>), ConfracError> {
    let b = tail_bounds(pq, j, precision_bits + GUARD)?;
    Ok((b.lo, b.hi))
}

/// Enclosure of `α` itself.
pub fn value_interval(pq: &PartialQuotients, precision_bits: u64) -> Interval {
    let b = tail_bounds(pq, 0, precision_bits + GUARD).expect("index 0 is always available");
    Interval {
        lo: b.lo,
        hi: b.hi.expect("α is bounded once a quotient is stored"),
    }
}

/// `δ_k = q_k·α − l_k`, stored as sign plus an enclosure of `|δ_k|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedError {
    pub k: usize,
    pub negative: bool,
    /// Lower bound of `|δ_k|`.
    pub lo: Dyadic,
    /// Upper bound of `|δ_k|`.
    pub hi: Dyadic,
    pub precision_bits: u64,
}

impl SignedError {
    /// Midpoint as a double; tiny values flush to zero.
    pub fn to_f64(&self) -> f64 {
        let m = Interval { lo: self.lo.clone(), hi: self.hi.clone() }.mid(64).to_f64();
        if self.negative {
            -m
        } else {
            m
        }
    }

    /// `θ_k = ‖q_k α‖ = |δ_k|` as a double.
    pub fn theta(&self) -> f64 {
        self.to_f64().abs()
    }

    pub fn signed_interval(&self) -> Interval {
        if self.negative {
            Interval { lo: self.hi.neg(), hi: self.lo.neg() }
        } else {
            Interval { lo: self.lo.clone(), hi: self.hi.clone() }
        }
    }

    /// Certifies `|δ_k| ≤ e^{-q}`.
    pub fn bounded_by_exp_neg(&self, q: u64) -> bool {
        let e = exp_int(q, self.precision_bits + GUARD);
        let bound = e.hi.recip(self.precision_bits + GUARD, Rounding::Down);
        self.hi <= bound
    }

    /// Certifies `|δ_k| ≤ bound` for a rational bound.
    pub fn bounded_by(&self, bound: &Dyadic) -> bool {
        &self.hi <= bound
    }
}

/// `δ_k` from the tail identity `δ_k = (-1)^k / (α_{k+1} q_k + q_{k-1})`,
/// with relative error at most `2^-precision_bits`.
pub fn delta(
    pq: &PartialQuotients,
    k: usize,
    precision_bits: u64,
) -> Result<SignedError, ConfracError> {
    let len = pq.len();
    if k >= len {
        return Err(ConfracError::IndexOutOfRange { k, len });
    }
    if pq.tail() == Tail::Exact && k + 1 >= len {
        return Err(ConfracError::InsufficientTail { k, len });
    }
    let wp = precision_bits + GUARD;
    let t = tail_bounds(pq, k + 1, wp)?;
    let t_hi = t.hi.ok_or(ConfracError::InsufficientTail { k, len })?;
    let conv = pq.convergents(k)?;
    let q_k = &conv[k].q;
    let q_km1 = if k == 0 { BigInt::zero() } else { conv[k - 1].q.clone() };
    let q_km1 = Dyadic::from_int(q_km1);
    let den_lo = t.lo.mul_int(q_k, wp, Rounding::Down).add(&q_km1, wp, Rounding::Down);
    let den_hi = t_hi.mul_int(q_k, wp, Rounding::Up).add(&q_km1, wp, Rounding::Up);
    let lo = den_hi.recip(wp, Rounding::Down);
    let hi = den_lo.recip(wp, Rounding::Up);
    let width = hi.sub(&lo, wp, Rounding::Up);
    if width > lo.scale2(-(precision_bits as i64)) {
        return Err(ConfracError::InsufficientTail { k, len });
    }
    Ok(SignedError { k, negative: k % 2 == 1, lo, hi, precision_bits })
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Fixed {
    /// `x mod 1` scaled by 2^128.
    Narrow(u128),
    /// `x mod 1` scaled by 2^bits.
    Wide(BigUint, u64),
}

/// A real number `x` reduced mod 1 onto a fixed-point grid, with a bound
/// on the distance to the true value. Integer multiples `n·x mod 1` are
/// then exact wrapping products, with error `|n|·radius`.
#[derive(Clone, Debug, PartialEq)]
pub struct CertifiedPhase {
    fixed: Fixed,
    radius: f64,
}

/// `frac(n·x)` in `[0, 1)` with its certified error, measured on the circle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CertifiedFrac {
    pub value: f64,
    pub turn: Turn,
    pub error: f64,
}

fn up_f64(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * (1.0 + 4.0 * f64::EPSILON)
    }
}

impl CertifiedPhase {
    pub fn from_interval(iv: &Interval, precision_bits: u64) -> CertifiedPhase {
        let bits = precision_bits.max(128);
        let mid = iv.mid(bits + GUARD);
        let half_width = up_f64(iv.width(64).to_f64()) / 2.0;
        let grid = 2f64.powi(-(bits as i32) - 1);
        let radius = up_f64(half_width + grid);
        let f = mid.frac_fixed(bits);
        let fixed = if bits == 128 {
            Fixed::Narrow(f.to_u128().expect("fits in 128 bits"))
        } else {
            Fixed::Wide(f, bits)
        };
        CertifiedPhase { fixed, radius }
    }

    /// Phase of `δ_k`, i.e. `n·q_k·α mod 1 = n·δ_k mod 1`.
    pub fn of_delta(
        pq: &PartialQuotients,
        k: usize,
        precision_bits: u64,
    ) -> Result<CertifiedPhase, ConfracError> {
        let d = delta(pq, k, precision_bits)?;
        Ok(CertifiedPhase::from_interval(&d.signed_interval(), precision_bits))
    }

    /// Phase of `α`.
    pub fn of_alpha(pq: &PartialQuotients, precision_bits: u64) -> CertifiedPhase {
        CertifiedPhase::from_interval(&value_interval(pq, precision_bits), precision_bits)
    }

    /// Exact phase of a double.
    pub fn of_f64(x: f64) -> CertifiedPhase {
        CertifiedPhase::from_interval(&Interval::point(Dyadic::from_f64(x)), 128)
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// `n·x mod 1` as a 64-bit turn, without an accuracy check.
    pub fn turn(&self, n: i128) -> Turn {
        match &self.fixed {
            Fixed::Narrow(f) => {
                let p = f.wrapping_mul(n as u128);
                // round the low 64 bits into the turn
                let t = (p >> 64) as u64;
                Turn(t.wrapping_add(((p >> 63) & 1) as u64))
            }
            Fixed::Wide(f, bits) => {
                let modulus = BigUint::one() << *bits;
                let m = BigUint::from(n.unsigned_abs()) % &modulus;
                let mut p = (f * m) % &modulus;
                if n < 0 && !p.is_zero() {
                    p = &modulus - p;
                }
                let shift = bits - 64;
                let half = BigUint::one() << (shift - 1);
                let t = ((p + half) >> shift) % (BigUint::one() << 64u32);
                Turn(t.to_u64().expect("reduced mod 2^64"))
            }
        }
    }

    /// `frac(n·x)` with absolute error at most `eps`.
    pub fn frac(&self, n: i128, eps: f64) -> Result<CertifiedFrac, ConfracError> {
        let error = up_f64(n.unsigned_abs() as f64 * self.radius + 2f64.powi(-65));
        if error > eps {
            return Err(ConfracError::PrecisionInsufficient { eps, achieved: error });
        }
        let turn = self.turn(n);
        let mut value = turn.to_unit_interval();
        if value >= 1.0 {
            value = 0.0;
        }
        Ok(CertifiedFrac { value, turn, error })
    }
}

/// `frac(n·q_k·α)`, computed as `frac(n·δ_k)` since `n·l_k` is an integer.
pub fn frac_multiple(
    pq: &PartialQuotients,
    n: u64,
    k: usize,
    eps: f64,
    precision_bits: u64,
) -> Result<CertifiedFrac, ConfracError> {
    if eps <= 0.0 {
        return Err(ConfracError::InvalidInput("eps must be positive".into()));
    }
    if n == 0 {
        return Ok(CertifiedFrac { value: 0.0, turn: Turn::ZERO, error: 0.0 });
    }
    CertifiedPhase::of_delta(pq, k, precision_bits)?.frac(n as i128, eps)
}

/// Rational bound with an open/closed flag.
#[derive(Clone, Debug)]
struct Bound {
    v: BigRational,
    open: bool,
}

/// Exact enclosure of `α` from the convergents and the tail kind.
fn alpha_exact(pq: &PartialQuotients) -> (Bound, Bound) {
    let conv = pq.all_convergents();
    let last = conv.len() - 1;
    let end = BigRational::new(conv[last].l.clone(), conv[last].q.clone());
    if pq.tail() == Tail::Exact {
        return (Bound { v: end.clone(), open: false }, Bound { v: end, open: false });
    }
    // α = (t l_J + l_{J-1}) / (t q_J + q_{J-1}) for some finite t > 1
    let (lp, qp) = if last == 0 {
        (BigInt::one(), BigInt::zero())
    } else {
        (conv[last - 1].l.clone(), conv[last - 1].q.clone())
    };
    let other = BigRational::new(&conv[last].l + lp, &conv[last].q + qp);
    let (a, b) = (Bound { v: end, open: true }, Bound { v: other, open: true });
    if a.v <= b.v {
        (a, b)
    } else {
        (b, a)
    }
}

/// Checks `1/(2 q_k q_{k+1}) < |α − l_k/q_k| < 1/(q_k q_{k+1})` exactly,
/// for `k ≥ 2` with `q_{k+1}` materialized.
pub fn approx_inequality_check(pq: &PartialQuotients, k: usize) -> Result<bool, ConfracError> {
    let len = pq.len();
    if k < 2 {
        return Err(ConfracError::InvalidInput("the sandwich is stated for k ≥ 2".into()));
    }
    if k + 1 >= len {
        return Err(ConfracError::IndexOutOfRange { k: k + 1, len });
    }
    let conv = pq.all_convergents();
    let (q_k, q_next) = (&conv[k].q, &conv[k + 1].q);
    let approx = BigRational::new(conv[k].l.clone(), q_k.clone());
    let (lo, hi) = alpha_exact(pq);
    let d_lo = Bound { v: &lo.v - &approx, open: lo.open };
    let d_hi = Bound { v: &hi.v - &approx, open: hi.open };
    // |α − l_k/q_k| enclosure
    let (abs_lo, abs_hi) = if !d_lo.v.is_negative() {
        (d_lo, d_hi)
    } else if !d_hi.v.is_positive() {
        (
            Bound { v: -d_hi.v, open: d_hi.open },
            Bound { v: -d_lo.v, open: d_lo.open },
        )
    } else {
        let top = if d_hi.v > -d_lo.v.clone() {
            d_hi
        } else {
            Bound { v: -d_lo.v, open: d_lo.open }
        };
        (Bound { v: BigRational::zero(), open: false }, top)
    };
    let qq = BigRational::from_integer(q_k * q_next);
    let upper = qq.recip();
    let lower = &upper / BigRational::from_integer(BigInt::from(2));
    let above = match abs_lo.v.cmp(&lower) {
        Ordering::Greater => true,
        Ordering::Equal => abs_lo.open,
        Ordering::Less => false,
    };
    let below = match abs_hi.v.cmp(&upper) {
        Ordering::Less => true,
        Ordering::Equal => abs_hi.open,
        Ordering::Greater => false,
    };
    Ok(above && below)
}

/// `max_k log q_{k+1} / log q_k` over materialized pairs with `q_k > 1`:
/// an empirical lower estimate of the diophantine exponent.
pub fn diophantine_exponent_estimate(pq: &PartialQuotients) -> Result<f64, ConfracError> {
    if pq.len() < 3 {
        return Err(ConfracError::InvalidInput("need at least 3 convergents".into()));
    }
    let q = pq.denominators();
    let logs: Vec<f64> = q.iter().map(|x| Dyadic::from_int(x.clone()).ln()).collect();
    let best = logs
        .windows(2)
        .zip(&q)
        .filter(|(_, qk)| **qk > BigInt::one())
        .map(|(w, _)| w[1] / w[0])
        .fold(f64::NEG_INFINITY, f64::max);
    if best.is_finite() {
        Ok(best)
    } else {
        Err(ConfracError::InvalidInput("no convergent with q_k > 1 and a successor".into()))
    }
}
