//! Exact continued fractions.
//!
//! Partial quotients and convergents are big integers. Quantities that
//! depend on the infinite tail of the expansion (the signed errors
//! `δ_k = q_k·α − l_k`, fractional parts of `n·q_k·α`) are carried as
//! certified enclosures, never as bare floats.

mod approx;
pub mod dyadic;
mod expand;
mod liouville;

pub use approx::{
    approx_inequality_check, delta, diophantine_exponent_estimate, frac_multiple, tail_interval,
    value_interval, CertifiedFrac, CertifiedPhase, SignedError, DEFAULT_EPS,
};
pub use expand::{expand_rational, expand_real};
pub use liouville::{build_liouville_alpha, ceil_exp, DEFAULT_Q_CAP, MAX_Q_CAP};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// Default working precision in fractional bits.
pub const DEFAULT_PRECISION_BITS: u64 = 128;

#[derive(Debug, Error)]
pub enum ConfracError {
    #[error("index {k} out of range for {len} partial quotients")]
    IndexOutOfRange { k: usize, len: usize },
    #[error("δ_{k} needs more of the tail than the {len} available quotients certify")]
    InsufficientTail { k: usize, len: usize },
    #[error("requested accuracy {eps:e} not reachable (certified {achieved:e}); raise precision_bits")]
    PrecisionInsufficient { eps: f64, achieved: f64 },
    #[error("precision exhausted after {certified} certified quotients")]
    PrecisionExhausted {
        certified: usize,
        prefix: Box<PartialQuotients>,
    },
    #[error("invalid partial quotients: {0}")]
    InvalidQuotients(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("malformed continued fraction text: {0}")]
    Parse(String),
}

/// How a quotient list came to be.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Source {
    Explicit,
    LiouvilleConstructed,
    FloatExpanded,
}

impl Source {
    pub fn name(self) -> &'static str {
        match self {
            Source::Explicit => "explicit",
            Source::LiouvilleConstructed => "liouville-constructed",
            Source::FloatExpanded => "float-expanded",
        }
    }

    fn default_tail(self) -> Tail {
        match self {
            Source::LiouvilleConstructed => Tail::Liouville,
            _ => Tail::Open,
        }
    }
}

impl FromStr for Source {
    type Err = ConfracError;
    fn from_str(s: &str) -> Result<Source, ConfracError> {
        match s {
            "explicit" => Ok(Source::Explicit),
            "liouville-constructed" => Ok(Source::LiouvilleConstructed),
            "float-expanded" => Ok(Source::FloatExpanded),
            other => Err(ConfracError::Parse(format!("unknown source '{other}'"))),
        }
    }
}

/// What is known about the expansion past the last stored quotient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Tail {
    /// The list is the whole expansion of a rational number.
    Exact,
    /// The expansion continues; the next complete quotient exceeds 1.
    Open,
    /// Continues by the rule `a_{J+1} = ⌈e^{q_J}⌉`.
    Liouville,
}

/// `[a_0; a_1, a_2, …, a_J]` with `a_0 ≥ 0` and `a_k ≥ 1` for `k ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialQuotients {
    a: Vec<BigUint>,
    source: Source,
    tail: Tail,
}

/// `l_k / q_k = [a_0; a_1, …, a_k]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Convergent {
    pub k: usize,
    pub l: BigInt,
    pub q: BigInt,
}

impl PartialQuotients {
    pub fn new(a: Vec<BigUint>, source: Source, tail: Tail) -> Result<Self, ConfracError> {
        if a.is_empty() {
            return Err(ConfracError::InvalidQuotients("empty quotient list".into()));
        }
        if let Some(k) = a.iter().skip(1).position(|x| x.is_zero()) {
            return Err(ConfracError::InvalidQuotients(format!("a_{} = 0", k + 1)));
        }
        if tail == Tail::Liouville && source != Source::LiouvilleConstructed {
            return Err(ConfracError::InvalidQuotients(
                "Liouville tail requires a constructed source".into(),
            ));
        }
        Ok(PartialQuotients { a, source, tail })
    }

    /// Prefix of an irrational number given by explicit quotients.
    pub fn explicit<I: Into<BigUint>>(a: impl IntoIterator<Item = I>) -> Result<Self, ConfracError> {
        PartialQuotients::new(a.into_iter().map(Into::into).collect(), Source::Explicit, Tail::Open)
    }

    /// The complete expansion of a rational number.
    pub fn rational<I: Into<BigUint>>(a: impl IntoIterator<Item = I>) -> Result<Self, ConfracError> {
        PartialQuotients::new(a.into_iter().map(Into::into).collect(), Source::Explicit, Tail::Exact)
    }

    /// `[1; 1, 1, …]` with `len` quotients.
    pub fn golden(len: usize) -> Self {
        PartialQuotients::explicit(vec![1u32; len.max(1)]).expect("valid")
    }

    pub fn quotients(&self) -> &[BigUint] {
        &self.a
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn source(&self) -> Source {
        self.source
    }

    pub fn tail(&self) -> Tail {
        self.tail
    }

    pub fn is_rational(&self) -> bool {
        self.tail == Tail::Exact
    }

    /// Convergents `0..=k_max` by the three-term recurrence.
    pub fn convergents(&self, k_max: usize) -> Result<Vec<Convergent>, ConfracError> {
        if k_max >= self.a.len() {
            return Err(ConfracError::IndexOutOfRange { k: k_max, len: self.a.len() });
        }
        let mut out = Vec::with_capacity(k_max + 1);
        // seeds l_{-1}/q_{-1} = 1/0 and l_{-2}/q_{-2} = 0/1
        let (mut l2, mut q2) = (BigInt::zero(), BigInt::one());
        let (mut l1, mut q1) = (BigInt::one(), BigInt::zero());
        for (k, ak) in self.a[..=k_max].iter().enumerate() {
            let ak = BigInt::from(ak.clone());
            let l = &ak * &l1 + &l2;
            let q = &ak * &q1 + &q2;
            out.push(Convergent { k, l: l.clone(), q: q.clone() });
            l2 = std::mem::replace(&mut l1, l);
            q2 = std::mem::replace(&mut q1, q);
        }
        Ok(out)
    }

    pub fn all_convergents(&self) -> Vec<Convergent> {
        self.convergents(self.a.len() - 1).expect("non-empty")
    }

    /// Denominators `q_0, …, q_J`.
    pub fn denominators(&self) -> Vec<BigInt> {
        self.all_convergents().into_iter().map(|c| c.q).collect()
    }

    /// Serializes as `CF v1 <count> <source>` followed by one quotient per line.
    pub fn to_text(&self) -> String {
        let mut s = format!("CF v1 {} {}", self.a.len(), self.source.name());
        if self.tail != self.source.default_tail() {
            s.push_str(match self.tail {
                Tail::Exact => " exact",
                Tail::Open => " open",
                Tail::Liouville => " liouville",
            });
        }
        s.push('\n');
        for x in &self.a {
            s.push_str(&x.to_string());
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self, ConfracError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| ConfracError::Parse("empty input".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() < 4 || fields.len() > 5 || fields[0] != "CF" || fields[1] != "v1" {
            return Err(ConfracError::Parse(format!("bad header '{header}'")));
        }
        let count: usize = fields[2]
            .parse()
            .map_err(|_| ConfracError::Parse(format!("bad count '{}'", fields[2])))?;
        let source: Source = fields[3].parse()?;
        let tail = match fields.get(4) {
            None => source.default_tail(),
            Some(&"exact") => Tail::Exact,
            Some(&"open") => Tail::Open,
            Some(&"liouville") => Tail::Liouville,
            Some(other) => return Err(ConfracError::Parse(format!("unknown tail '{other}'"))),
        };
        let a = lines
            .map(|l| {
                l.trim()
                    .parse::<BigUint>()
                    .map_err(|_| ConfracError::Parse(format!("bad quotient '{l}'")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if a.len() != count {
            return Err(ConfracError::Parse(format!(
                "header announces {count} quotients, found {}",
                a.len()
            )));
        }
        PartialQuotients::new(a, source, tail)
    }
}

impl fmt::Display for PartialQuotients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}", self.a[0])?;
        for (i, x) in self.a.iter().enumerate().skip(1) {
            write!(f, "{}{}", if i == 1 { "; " } else { ", " }, x)?;
        }
        if self.tail != Tail::Exact {
            write!(f, ", …")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nums(c: &[Convergent]) -> Vec<(i64, i64)> {
        c.iter()
            .map(|c| (c.l.to_string().parse().unwrap(), c.q.to_string().parse().unwrap()))
            .collect()
    }

    #[test]
    fn seeds_match_recurrence() {
        let pq = PartialQuotients::rational([0u32, 2]).unwrap();
        assert_eq!(nums(&pq.convergents(1).unwrap()), vec![(0, 1), (1, 2)]);
        let fib = PartialQuotients::explicit([1u32, 1, 1, 1]).unwrap();
        assert_eq!(nums(&fib.all_convergents()), vec![(1, 1), (2, 1), (3, 2), (5, 3)]);
        let pq = PartialQuotients::explicit([7u32, 3, 5]).unwrap();
        let c = pq.convergents(0).unwrap();
        assert_eq!(nums(&c), vec![(7, 1)]);
    }

    #[test]
    fn convergent_index_out_of_range() {
        let pq = PartialQuotients::explicit([1u32, 2]).unwrap();
        assert!(matches!(pq.convergents(2), Err(ConfracError::IndexOutOfRange { .. })));
    }

    #[test]
    fn zero_quotient_rejected() {
        assert!(PartialQuotients::explicit([1u32, 0, 2]).is_err());
        assert!(PartialQuotients::explicit(Vec::<u32>::new()).is_err());
        assert!(PartialQuotients::explicit([0u32, 5]).is_ok());
    }

    #[test]
    fn text_format() {
        let pq = PartialQuotients::rational([0u32, 2]).unwrap();
        assert_eq!(pq.to_text(), "CF v1 2 explicit exact\n0\n2\n");
        let open = PartialQuotients::golden(3);
        assert_eq!(open.to_text(), "CF v1 3 explicit\n1\n1\n1\n");
        assert_eq!(PartialQuotients::from_text(&open.to_text()).unwrap(), open);
        assert_eq!(PartialQuotients::from_text(&pq.to_text()).unwrap(), pq);
    }

    #[test]
    fn text_format_errors() {
        assert!(PartialQuotients::from_text("").is_err());
        assert!(PartialQuotients::from_text("CF v2 1 explicit\n1\n").is_err());
        assert!(PartialQuotients::from_text("CF v1 2 explicit\n1\n").is_err());
        assert!(PartialQuotients::from_text("CF v1 1 unknown\n1\n").is_err());
        assert!(PartialQuotients::from_text("CF v1 2 explicit\n1\nx\n").is_err());
        assert!(PartialQuotients::from_text("CF v1 1 explicit liouville\n1\n").is_err());
    }

    #[test]
    fn display() {
        let pq = PartialQuotients::explicit([3u32, 7, 15]).unwrap();
        assert_eq!(pq.to_string(), "[3; 7, 15, …]");
        let r = PartialQuotients::rational([0u32, 2]).unwrap();
        assert_eq!(r.to_string(), "[0; 2]");
    }
}
