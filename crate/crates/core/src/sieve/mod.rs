//! Segmented sieves for the Möbius and Liouville functions.
//!
//! Values are stored one signed byte per integer. Segments are sieved
//! independently against the primes up to `√n_max`, so the output does
//! not depend on the segment size or on how segments are scheduled.

mod cache;

pub use cache::{read_table, write_table, CACHE_MAGIC};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default cap on table memory: 4 GiB of values.
pub const DEFAULT_MEMORY_BUDGET: u64 = 1 << 32;

#[derive(Debug, Error)]
pub enum SieveError {
    #[error("n_max = {n_max} needs {needed} bytes, over the budget of {budget} bytes")]
    ResourceExhausted { n_max: u64, needed: u64, budget: u64 },
    #[error("invalid sieve argument: {0}")]
    InvalidArgument(String),
    #[error("checkpoint {n} lies beyond the table (n_max = {n_max})")]
    OutOfRange { n: u64, n_max: u64 },
    #[error("corrupt cache: {0}")]
    CacheCorrupt(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TableKind {
    Moebius,
    Liouville,
}

impl TableKind {
    pub fn tag(self) -> u8 {
        match self {
            TableKind::Moebius => 0,
            TableKind::Liouville => 1,
        }
    }

    pub fn from_tag(tag: u8) -> Option<TableKind> {
        match tag {
            0 => Some(TableKind::Moebius),
            1 => Some(TableKind::Liouville),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TableKind::Moebius => "moebius",
            TableKind::Liouville => "liouville",
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SieveConfig {
    pub segment_size: u64,
    pub memory_budget: u64,
}

impl Default for SieveConfig {
    fn default() -> Self {
        SieveConfig {
            segment_size: 1 << 18,
            memory_budget: DEFAULT_MEMORY_BUDGET,
        }
    }
}

/// Sieved values of μ or λ on `[1, n_max]`. Immutable once built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MobiusTable {
    kind: TableKind,
    values: Vec<i8>,
}

impl MobiusTable {
    pub(crate) fn from_parts(kind: TableKind, values: Vec<i8>) -> MobiusTable {
        MobiusTable { kind, values }
    }

    pub fn kind(&self) -> TableKind {
        self.kind
    }

    pub fn n_max(&self) -> u64 {
        self.values.len() as u64
    }

    /// Value at `n`, `1 ≤ n ≤ n_max`.
    #[inline]
    pub fn get(&self, n: u64) -> i8 {
        self.values[(n - 1) as usize]
    }

    /// Values for `n = 1..=n_max`; index `i` holds the value at `i + 1`.
    pub fn values(&self) -> &[i8] {
        &self.values
    }

    pub fn check_range(&self, n: u64) -> Result<(), SieveError> {
        if n > self.n_max() {
            return Err(SieveError::OutOfRange { n, n_max: self.n_max() });
        }
        Ok(())
    }
}

/// Exact prefix sums `M(N) = Σ_{n≤N} value(n)` at increasing checkpoints.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MertensSeries {
    pub checkpoints: Vec<(u64, i64)>,
}

impl MertensSeries {
    pub fn at(&self, n: u64) -> Option<i64> {
        self.checkpoints
            .binary_search_by_key(&n, |&(k, _)| k)
            .ok()
            .map(|i| self.checkpoints[i].1)
    }
}

/// Primes up to `limit` by the plain sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    for i in 2..=limit {
        if composite[i] {
            continue;
        }
        primes.push(i as u64);
        let mut j = i * i;
        while j <= limit {
            composite[j] = true;
            j += i;
        }
    }
    primes
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

fn check_budget(n_max: u64, cfg: &SieveConfig) -> Result<(), SieveError> {
    if n_max == 0 {
        return Err(SieveError::InvalidArgument("n_max must be at least 1".into()));
    }
    if cfg.segment_size == 0 {
        return Err(SieveError::InvalidArgument("segment_size must be at least 1".into()));
    }
    if n_max > cfg.memory_budget || n_max > usize::MAX as u64 {
        return Err(SieveError::ResourceExhausted {
            n_max,
            needed: n_max,
            budget: cfg.memory_budget,
        });
    }
    Ok(())
}

/// Sieves the segment `[lo, lo + out.len())` into `out`.
fn sieve_segment(kind: TableKind, primes: &[u64], lo: u64, out: &mut [i8]) {
    let hi = lo + out.len() as u64 - 1;
    // cofactor left after removing the small primes found so far
    let mut rest: Vec<u64> = (lo..=hi).collect();
    out.fill(1);
    for &p in primes {
        if p * p > hi {
            break;
        }
        match kind {
            TableKind::Moebius => {
                let mut m = lo.div_ceil(p) * p;
                while m <= hi {
                    let i = (m - lo) as usize;
                    out[i] = -out[i];
                    rest[i] /= p;
                    m += p;
                }
                let pp = p * p;
                let mut m = lo.div_ceil(pp) * pp;
                while m <= hi {
                    out[(m - lo) as usize] = 0;
                    m += pp;
                }
            }
            TableKind::Liouville => {
                let mut pk = p;
                loop {
                    let mut m = lo.div_ceil(pk) * pk;
                    while m <= hi {
                        let i = (m - lo) as usize;
                        out[i] = -out[i];
                        rest[i] /= p;
                        m += pk;
                    }
                    match pk.checked_mul(p) {
                        Some(next) if next <= hi => pk = next,
                        _ => break,
                    }
                }
            }
        }
    }
    // at most one prime above √hi remains
    for (v, r) in out.iter_mut().zip(&rest) {
        if *r > 1 {
            *v = -*v;
        }
    }
}

fn segmented(kind: TableKind, n_max: u64, cfg: &SieveConfig) -> Result<MobiusTable, SieveError> {
    check_budget(n_max, cfg)?;
    let primes = primes_up_to(isqrt(n_max));
    let mut values = vec![0i8; n_max as usize];
    let seg = cfg.segment_size.min(n_max) as usize;
    values
        .par_chunks_mut(seg)
        .enumerate()
        .for_each(|(i, chunk)| sieve_segment(kind, &primes, 1 + (i * seg) as u64, chunk));
    Ok(MobiusTable { kind, values })
}

/// μ(n) for `1 ≤ n ≤ n_max`.
pub fn mobius_sieve(n_max: u64, cfg: &SieveConfig) -> Result<MobiusTable, SieveError> {
    segmented(TableKind::Moebius, n_max, cfg)
}

/// λ(n) = (-1)^Ω(n) for `1 ≤ n ≤ n_max`.
pub fn liouville_sieve(n_max: u64, cfg: &SieveConfig) -> Result<MobiusTable, SieveError> {
    segmented(TableKind::Liouville, n_max, cfg)
}

/// μ(n) by trial division.
pub fn mobius_single(n: u64) -> i8 {
    assert!(n >= 1, "μ is defined for n ≥ 1");
    let mut n = n;
    let mut sign = 1i8;
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// λ(n) by trial division.
pub fn liouville_single(n: u64) -> i8 {
    assert!(n >= 1, "λ is defined for n ≥ 1");
    let mut n = n;
    let mut sign = 1i8;
    let mut p = 2u64;
    while p * p <= n {
        while n.is_multiple_of(p) {
            n /= p;
            sign = -sign;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// Prefix sums of `table` at the given checkpoints (sorted, deduplicated).
pub fn mertens(table: &MobiusTable, checkpoints: &[u64]) -> Result<MertensSeries, SieveError> {
    let mut points: Vec<u64> = checkpoints.to_vec();
    points.sort_unstable();
    points.dedup();
    if let Some(&n) = points.first() {
        if n == 0 {
            return Err(SieveError::InvalidArgument("checkpoints start at 1".into()));
        }
    }
    if let Some(&n) = points.last() {
        table.check_range(n)?;
    }
    let mut out = Vec::with_capacity(points.len());
    let mut acc = 0i64;
    let mut next = 1u64;
    for n in points {
        acc += table.values[(next - 1) as usize..n as usize]
            .iter()
            .map(|&v| v as i64)
            .sum::<i64>();
        next = n + 1;
        out.push((n, acc));
    }
    Ok(MertensSeries { checkpoints: out })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(n: u64) -> MobiusTable {
        mobius_sieve(n, &SieveConfig::default()).unwrap()
    }

    #[test]
    fn first_values() {
        assert_eq!(table(1).values(), &[1]);
        let t = table(12);
        assert_eq!(t.values(), &[1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0]);
        assert_eq!(t.get(12), 0);
        let s: i64 = table(10).values().iter().map(|&v| v as i64).sum();
        assert_eq!(s, -1);
    }

    #[test]
    fn single_values() {
        assert_eq!(mobius_single(1), 1);
        assert_eq!(mobius_single(30), -1);
        assert_eq!(mobius_single(12), 0);
        assert_eq!(liouville_single(4), 1);
        assert_eq!(liouville_single(2), -1);
        assert_eq!(liouville_single(12), -1);
    }

    #[test]
    fn liouville_examples() {
        let t = liouville_sieve(12, &SieveConfig::default()).unwrap();
        assert_eq!(t.get(4), 1);
        assert_eq!(t.get(2), -1);
        assert_eq!(t.get(12), -1);
        assert_eq!(t.kind(), TableKind::Liouville);
    }

    #[test]
    fn liouville_matches_trial_division() {
        let t = liouville_sieve(20_000, &SieveConfig { segment_size: 777, ..Default::default() })
            .unwrap();
        for n in 1..=20_000 {
            assert_eq!(t.get(n), liouville_single(n), "n = {n}");
        }
    }

    #[test]
    fn mertens_small() {
        let t = table(100);
        let m = mertens(&t, &[10, 1, 100]).unwrap();
        assert_eq!(m.at(1), Some(1));
        assert_eq!(m.at(10), Some(-1));
        assert_eq!(m.at(100), Some(1));
    }

    #[test]
    fn mertens_out_of_range() {
        let t = table(10);
        assert!(matches!(mertens(&t, &[11]), Err(SieveError::OutOfRange { .. })));
    }

    #[test]
    fn budget_is_enforced() {
        let cfg = SieveConfig { memory_budget: 1000, ..Default::default() };
        assert!(matches!(
            mobius_sieve(1001, &cfg),
            Err(SieveError::ResourceExhausted { .. })
        ));
        assert!(mobius_sieve(1000, &cfg).is_ok());
    }

    #[test]
    fn bad_arguments() {
        assert!(mobius_sieve(0, &SieveConfig::default()).is_err());
        let cfg = SieveConfig { segment_size: 0, ..Default::default() };
        assert!(mobius_sieve(10, &cfg).is_err());
    }

    #[test]
    fn segment_sizes_agree() {
        let n = 5000;
        let reference = table(n);
        for seg in [1, 7, 1024, n] {
            let cfg = SieveConfig { segment_size: seg, ..Default::default() };
            assert_eq!(mobius_sieve(n, &cfg).unwrap(), reference, "segment {seg}");
        }
    }
}
