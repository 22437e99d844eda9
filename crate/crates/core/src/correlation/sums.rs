//! Möbius-weighted exponential sums.

use super::{CorrelationError, CorrelationSeries};
use crate::flows::{truncation_cutoff, FurstenbergCocycle};
use crate::scalar::{unit, Real};
use crate::sieve::MobiusTable;
use crate::summation::{pairwise, sum_range};
use crate::turn::Turn;
use num_complex::Complex;
use rayon::prelude::*;

fn zero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

fn check_n(table: &MobiusTable, n: u64) -> Result<(), CorrelationError> {
    if n == 0 {
        return Err(CorrelationError::InvalidInput("N must be at least 1".into()));
    }
    table.check_range(n)?;
    Ok(())
}

/// `(1/N) Σ_{n≤N} μ(n) ξ(n)`.
pub fn mobius_correlation<T, F>(table: &MobiusTable, xi: F, n: u64) -> Result<Complex<T>, CorrelationError>
where
    T: Real,
    F: Fn(u64) -> Complex<T> + Sync,
{
    check_n(table, n)?;
    let s = sum_range(1, n, |m| match table.get(m) {
        0 => zero(),
        v => xi(m) * T::of_i64(v as i64),
    });
    Ok(s / T::of(n as f64))
}

/// `Σ_{n≤N} μ(n) e(phase(n))`, skipping the zeros of `μ`.
fn weighted_sum<T, F>(table: &MobiusTable, n: u64, phase: F) -> Complex<T>
where
    T: Real,
    F: Fn(u64) -> Complex<T> + Sync,
{
    sum_range(1, n, |m| match table.get(m) {
        0 => zero(),
        1 => phase(m),
        _ => -phase(m),
    })
}

/// Cutoff `K(N)` checked against the cocycle's certified support.
fn cutoff<T: Real>(cocycle: &FurstenbergCocycle<T>, n: u64) -> Result<usize, CorrelationError> {
    let k = truncation_cutoff(cocycle.rotation().denominators(), n)?;
    if k > cocycle.k_support() {
        return Err(crate::flows::FlowsError::TruncationOutOfRange { k, support: cocycle.k_support() }.into());
    }
    Ok(k)
}

/// `S(N) = Σ_{n≤N} μ(n) e(Σ_{j<n} h(jα))` on each grid point, with `h`
/// truncated at `K(N)` and the inner sum taken in telescoped form.
pub fn furstenberg_s<T: Real>(
    cocycle: &FurstenbergCocycle<T>,
    table: &MobiusTable,
    grid: &[u64],
) -> Result<CorrelationSeries<T>, CorrelationError> {
    let mut entries = Vec::with_capacity(grid.len());
    let mut ks = Vec::with_capacity(grid.len());
    for &n in grid {
        check_n(table, n)?;
        let k = cutoff(cocycle, n)?;
        for j in 1..=k {
            cocycle.rotation().certify_steps(j, n)?;
        }
        let s = weighted_sum(table, n, |m| {
            unit(cocycle.cocycle_sum_telescoped(m, k).expect("steps certified above"))
        });
        entries.push((n, s));
        ks.push(k.to_string());
    }
    let meta = format!("S(N), furstenberg cocycle, K = {}", ks.join("/"));
    CorrelationSeries::new(entries, meta)
}

/// `S̃(N) = Σ_{n≤N} μ(n) e(Σ_{1≤|k|≤K−1} c_k e(n q_k α))`, where the inner
/// sum is `2 Σ_{k<K} c_k cos(2π n δ_k)`.
pub fn s_tilde<T: Real>(
    cocycle: &FurstenbergCocycle<T>,
    table: &MobiusTable,
    n: u64,
) -> Result<Complex<T>, CorrelationError> {
    check_n(table, n)?;
    let k = cutoff(cocycle, n)?;
    let rot = cocycle.rotation();
    for j in 1..k {
        rot.certify_steps(j, n)?;
    }
    let eps = rot.eps();
    Ok(weighted_sum(table, n, |m| {
        let mut p = T::zero();
        for j in 1..k {
            let t = rot.delta_phase(j).frac(m as i128, eps).expect("steps certified above").turn;
            p = p + T::of(2.0) * cocycle.c(j as i64) * t.cos::<T>();
        }
        unit(p)
    }))
}

/// `Σ_{n≤N} μ(n) e(nθ)`.
pub fn davenport_sum<T: Real>(table: &MobiusTable, theta: T, n: u64) -> Result<Complex<T>, CorrelationError> {
    davenport_sum_turn(table, Turn::from_real(theta), n)
}

/// [`davenport_sum`] at a fixed-point frequency; `n·θ` is formed exactly.
pub fn davenport_sum_turn<T: Real>(table: &MobiusTable, theta: Turn, n: u64) -> Result<Complex<T>, CorrelationError> {
    check_n(table, n)?;
    Ok(weighted_sum(table, n, |m| theta.times(m as i64).unit()))
}

/// `Σ_{n≤N} μ(n) e(n Σ_i l_i θ_i)`. The combined frequency is reduced mod 1
/// in fixed point, so this is `davenport_sum` at `⟨l, θ⟩ mod 1`.
pub fn multifreq_davenport<T: Real>(
    table: &MobiusTable,
    l: &[i64],
    theta: &[T],
    n: u64,
) -> Result<Complex<T>, CorrelationError> {
    if l.len() != theta.len() {
        return Err(CorrelationError::InvalidInput("frequency and angle vectors differ in length".into()));
    }
    let combined = l.iter().zip(theta).fold(Turn::ZERO, |acc, (&li, &t)| acc + Turn::from_real(t).times(li));
    davenport_sum_turn(table, combined, n)
}

/// Maximizer of `|Σ_{n≤N} μ(n) e(nθ)|` over `θ = j / G`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DavenportPeak<T> {
    pub index: u64,
    pub grid_count: u64,
    pub theta: f64,
    pub value: Complex<T>,
}

impl<T: Real> DavenportPeak<T> {
    pub fn normalized(&self, n: u64) -> T {
        self.value.norm() / T::of(n as f64)
    }
}

/// All `G` grid values `Σ_{n≤N} μ(n) e(nj/G)`.
///
/// `μ` is first binned by `n mod G`, then a direct DFT is taken with a
/// twiddle table satisfying `w[G − i] = conj(w[i])` exactly, so the value
/// at `G − j` is the exact conjugate of the value at `j`.
pub fn davenport_grid<T: Real>(table: &MobiusTable, n: u64, grid_count: u64) -> Result<Vec<Complex<T>>, CorrelationError> {
    check_n(table, n)?;
    if grid_count < 2 {
        return Err(CorrelationError::InvalidInput("grid_count must be at least 2".into()));
    }
    let g = grid_count as usize;
    let mut bins = vec![0i64; g];
    for m in 1..=n {
        bins[(m % grid_count) as usize] += table.get(m) as i64;
    }
    let mut w = vec![zero::<T>(); g];
    for i in 0..=g / 2 {
        w[i] = Turn::from_ratio(i as u64, grid_count).unit();
        if i != 0 {
            w[g - i] = w[i].conj();
        }
    }
    if g.is_multiple_of(2) {
        // e(1/2) must be self-conjugate
        w[g / 2] = Complex::new(-T::one(), T::zero());
    }
    let values = (0..g)
        .into_par_iter()
        .map(|j| {
            let terms: Vec<Complex<T>> =
                bins.iter().enumerate().map(|(r, &b)| w[(r * j) % g] * T::of_i64(b)).collect();
            pairwise(&terms)
        })
        .collect();
    Ok(values)
}

/// First grid point attaining the maximum modulus.
pub fn sup_davenport<T: Real>(table: &MobiusTable, n: u64, grid_count: u64) -> Result<DavenportPeak<T>, CorrelationError> {
    let values = davenport_grid::<T>(table, n, grid_count)?;
    let mut best = 0;
    for (j, v) in values.iter().enumerate() {
        if v.norm() > values[best].norm() {
            best = j;
        }
    }
    Ok(DavenportPeak {
        index: best as u64,
        grid_count,
        theta: best as f64 / grid_count as f64,
        value: values[best],
    })
}
