use super::dyadic::{exp_int, Dyadic};
use super::{ConfracError, PartialQuotients, Source, Tail};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive};

pub const DEFAULT_Q_CAP: u64 = 1_000_000_000_000_000_000;

/// Largest accepted cap; keeps `e^{q_J}` exponents inside `i64`.
pub const MAX_Q_CAP: u64 = 1 << 62;

/// `⌈e^q⌉`, certified by refining the enclosure until both ends agree.
pub fn ceil_exp(q: u64) -> BigUint {
    if q == 0 {
        return BigUint::one();
    }
    let mut prec = 64 + 2 * q;
    loop {
        let e = exp_int(q, prec);
        let (lo, hi) = (e.lo.floor(), e.hi.floor());
        // e^q is irrational for q ≥ 1, so a tight enough bracket isolates it
        if lo == hi && e.hi > Dyadic::from_int(hi.clone()) {
            return (lo + BigInt::one()).to_biguint().expect("positive");
        }
        prec *= 2;
    }
}

/// `α = [0; 2, a_2, a_3, …]` with `a_{k+1} = ⌈e^{q_k}⌉`, so that
/// `q_{k+1} ≥ e^{q_k}` for every `k ≥ 1`. Quotients are materialized while
/// the denominators stay at or below `q_cap`; the rest is described by the
/// construction rule and recorded as a Liouville tail.
pub fn build_liouville_alpha(q_cap: u64) -> Result<PartialQuotients, ConfracError> {
    if q_cap > MAX_Q_CAP {
        return Err(ConfracError::InvalidInput(format!("q_cap above {MAX_Q_CAP}")));
    }
    if q_cap < 2 {
        return Err(ConfracError::InvalidInput("q_cap must admit q_1 = 2".into()));
    }
    let cap = BigInt::from(q_cap);
    let mut a = vec![BigUint::from(0u32), BigUint::from(2u32)];
    let (mut q_prev, mut q) = (BigInt::one(), BigInt::from(2));
    loop {
        let qk = q.to_u64().expect("q is capped");
        // a_{k+1} ≥ e^{q_k} already exceeds the cap
        if exp_int(qk, 64).lo > Dyadic::from_int(cap.clone()) {
            break;
        }
        let next_a = ceil_exp(qk);
        let next_q = BigInt::from(next_a.clone()) * &q + &q_prev;
        if next_q > cap {
            break;
        }
        a.push(next_a);
        q_prev = std::mem::replace(&mut q, next_q);
    }
    PartialQuotients::new(a, Source::LiouvilleConstructed, Tail::Liouville)
}
