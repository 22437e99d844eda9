//! Deterministic summation.
//!
//! Ranges are cut into fixed-size blocks that depend only on the range
//! length. Each block is reduced by pairwise summation and the block
//! totals are combined by the same pairwise tree, so the result is
//! bit-identical for any rayon pool size.

use num_traits::Zero;
use rayon::prelude::*;
use std::ops::Add;

/// Terms per leaf block of the parallel reduction.
pub const BLOCK: u64 = 1 << 12;

const LEAF: usize = 8;

/// Pairwise (cascade) sum with a fixed split at `len / 2`.
pub fn pairwise<S>(xs: &[S]) -> S
where
    S: Copy + Zero + Add<Output = S>,
{
    if xs.len() <= LEAF {
        let mut acc = S::zero();
        for &x in xs {
            acc = acc + x;
        }
        return acc;
    }
    let mid = xs.len() / 2;
    pairwise(&xs[..mid]) + pairwise(&xs[mid..])
}

/// `Σ_{n=lo}^{hi} f(n)` with the deterministic block/tree order.
pub fn sum_range<S, F>(lo: u64, hi: u64, f: F) -> S
where
    S: Copy + Zero + Add<Output = S> + Send + Sync,
    F: Fn(u64) -> S + Sync,
{
    if hi < lo {
        return S::zero();
    }
    let len = hi - lo + 1;
    let blocks = len.div_ceil(BLOCK);
    let partial: Vec<S> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let start = lo + b * BLOCK;
            let end = (start + BLOCK - 1).min(hi);
            let terms: Vec<S> = (start..=end).map(&f).collect();
            pairwise(&terms)
        })
        .collect();
    pairwise(&partial)
}

/// Runs `op` on a dedicated pool with `threads` workers.
pub fn with_threads<R: Send>(threads: usize, op: impl FnOnce() -> R + Send) -> R {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .expect("thread pool")
        .install(op)
}
