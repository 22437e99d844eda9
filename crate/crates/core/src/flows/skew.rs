//! Skew products `T(x, y) = (ax + α, cx + dy + h(x))` on the 2-torus.

use super::cocycle::FurstenbergCocycle;
use super::fourier::AnalyticFourierSeries;
use super::rotation::{CertifiedRotation, RotationPoint};
use super::FlowsError;
use crate::confrac::CertifiedPhase;
use crate::scalar::{frac, unit, Real};
use crate::summation::pairwise;
use crate::turn::Turn;
use num_complex::Complex;
use std::sync::Arc;

#[derive(Clone, Debug)]
pub enum Rotation<T> {
    /// A plain floating-point angle.
    Real(T),
    Certified(Arc<CertifiedRotation>),
}

#[derive(Clone, Debug)]
pub enum Fiber<T> {
    Zero,
    Fourier(AnalyticFourierSeries<T>),
    /// Cocycle truncated to `1 ≤ |k| ≤ truncation`.
    Cocycle { cocycle: Arc<FurstenbergCocycle<T>>, truncation: usize },
}

/// How orbit coordinates are carried.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrecisionMode {
    /// Plain floating-point iteration.
    Double,
    /// The base coordinate is kept as `s·x_0 + m·α` and every phase is
    /// formed from certified fixed-point data (at least 128 fractional
    /// bits), so the base orbit never drifts.
    Extended,
}

#[derive(Clone, Debug)]
pub struct SkewProductMap<T> {
    a: i64,
    c: i64,
    d: i64,
    rotation: Rotation<T>,
    fiber: Fiber<T>,
}

/// Points `p_0, …, p_N` with the flags a report needs.
#[derive(Clone, Debug, PartialEq)]
pub struct Orbit<T> {
    pub points: Vec<(T, T)>,
    /// False when `α` is rational.
    pub generic: bool,
}

impl<T: Real> SkewProductMap<T> {
    pub fn new(a: i64, c: i64, d: i64, rotation: Rotation<T>, fiber: Fiber<T>) -> Result<Self, FlowsError> {
        if a.abs() != 1 || d.abs() != 1 {
            return Err(FlowsError::InvalidMap(format!("need a, d ∈ {{±1}}, got a = {a}, d = {d}")));
        }
        if let Fiber::Cocycle { cocycle, truncation } = &fiber {
            match &rotation {
                Rotation::Certified(r) if r.alpha() == cocycle.rotation().alpha() => {}
                _ => return Err(FlowsError::InvalidMap("cocycle must be built over the map's α".into())),
            }
            if *truncation > cocycle.k_support() {
                return Err(FlowsError::TruncationOutOfRange { k: *truncation, support: cocycle.k_support() });
            }
        }
        Ok(SkewProductMap { a, c, d, rotation, fiber })
    }

    /// `(x + α, y + h(x))`.
    pub fn furstenberg(cocycle: Arc<FurstenbergCocycle<T>>, truncation: usize) -> Result<Self, FlowsError> {
        let rotation = Rotation::Certified(cocycle.rotation().clone());
        SkewProductMap::new(1, 0, 1, rotation, Fiber::Cocycle { cocycle, truncation })
    }

    pub fn coefficients(&self) -> (i64, i64, i64) {
        (self.a, self.c, self.d)
    }

    pub fn rotation(&self) -> &Rotation<T> {
        &self.rotation
    }

    pub fn fiber(&self) -> &Fiber<T> {
        &self.fiber
    }

    pub fn is_generic(&self) -> bool {
        match &self.rotation {
            Rotation::Real(_) => true,
            Rotation::Certified(r) => !r.is_rational(),
        }
    }

    fn alpha(&self) -> T {
        match &self.rotation {
            Rotation::Real(a) => *a,
            Rotation::Certified(r) => T::of(r.alpha_f64()),
        }
    }

    fn h(&self, x: T) -> Result<T, FlowsError> {
        Ok(match &self.fiber {
            Fiber::Zero => T::zero(),
            Fiber::Fourier(f) => f.eval(x),
            Fiber::Cocycle { cocycle, truncation } => cocycle.h_eval(x, *truncation)?,
        })
    }

    /// One step in floating point.
    pub fn step(&self, (x, y): (T, T)) -> Result<(T, T), FlowsError> {
        let h = self.h(x)?;
        let nx = frac(T::of_i64(self.a) * x + self.alpha());
        let ny = frac(T::of_i64(self.c) * x + T::of_i64(self.d) * y + h);
        Ok((nx, ny))
    }

    fn orbit_double(&self, p0: (T, T), n: usize) -> Result<Vec<(T, T)>, FlowsError> {
        let mut out = Vec::with_capacity(n + 1);
        let mut p = (frac(p0.0), frac(p0.1));
        out.push(p);
        for _ in 0..n {
            p = self.step(p)?;
            out.push(p);
        }
        Ok(out)
    }

    fn orbit_extended(&self, p0: (T, T), n: usize) -> Result<Vec<(T, T)>, FlowsError> {
        let x0 = Turn::from_real(p0.0);
        let mut y = Turn::from_real(p0.1);
        let real_phase = match &self.rotation {
            Rotation::Real(a) => Some(CertifiedPhase::of_f64(a.as_f64())),
            Rotation::Certified(_) => None,
        };
        let x_turn = |p: RotationPoint| -> Result<Turn, FlowsError> {
            match (&self.rotation, &real_phase) {
                (Rotation::Certified(r), _) => r.point_turn(p),
                (_, Some(ph)) => Ok(p.base.times(p.scale) + ph.frac(p.steps, crate::confrac::DEFAULT_EPS)?.turn),
                _ => unreachable!("real rotations carry a phase"),
            }
        };
        let to_t = |t: Turn| frac(T::of(t.to_unit_interval()));
        let mut p = RotationPoint::at(x0);
        let mut out = Vec::with_capacity(n + 1);
        out.push((to_t(x_turn(p)?), to_t(y)));
        for _ in 0..n {
            let x = x_turn(p)?;
            let h = match &self.fiber {
                Fiber::Zero => T::zero(),
                Fiber::Fourier(f) => f.eval_turn(x),
                Fiber::Cocycle { cocycle, truncation } => cocycle.h_at(p, *truncation)?,
            };
            y = x.times(self.c) + y.times(self.d) + Turn::from_real(h);
            p = RotationPoint { scale: p.scale * self.a, base: p.base, steps: self.a as i128 * p.steps + 1 };
            out.push((to_t(x_turn(p)?), to_t(y)));
        }
        Ok(out)
    }
}

/// `p_0, T p_0, …, T^N p_0`.
pub fn skew_orbit<T: Real>(
    map: &SkewProductMap<T>,
    p0: (T, T),
    n: usize,
    mode: PrecisionMode,
) -> Result<Orbit<T>, FlowsError> {
    let points = match mode {
        PrecisionMode::Double => map.orbit_double(p0, n)?,
        PrecisionMode::Extended => map.orbit_extended(p0, n)?,
    };
    Ok(Orbit { points, generic: map.is_generic() })
}

#[derive(Clone, Debug, PartialEq)]
pub struct IrregularityReport<T> {
    /// `(N, average over n = 1..=N)` in grid order.
    pub averages: Vec<(u64, Complex<T>)>,
    pub min_abs: T,
    pub max_abs: T,
    /// Largest distance between two averages on the grid.
    pub oscillation: T,
    pub generic: bool,
}

/// Birkhoff averages of `e(m₁x + m₂y)` along the orbit of `p0`.
pub fn irregularity_scan<T: Real>(
    map: &SkewProductMap<T>,
    observable: (i64, i64),
    p0: (T, T),
    grid: &[u64],
    mode: PrecisionMode,
) -> Result<IrregularityReport<T>, FlowsError> {
    if grid.is_empty() || grid.contains(&0) || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(FlowsError::InvalidInput("grid must be strictly increasing and positive".into()));
    }
    let n_max = *grid.last().expect("non-empty") as usize;
    let orbit = skew_orbit(map, p0, n_max, mode)?;
    let (m1, m2) = (T::of_i64(observable.0), T::of_i64(observable.1));
    let xi: Vec<Complex<T>> = orbit.points[1..].iter().map(|&(x, y)| unit(m1 * x + m2 * y)).collect();
    let averages: Vec<(u64, Complex<T>)> =
        grid.iter().map(|&n| (n, pairwise(&xi[..n as usize]) / T::of(n as f64))).collect();
    let abs = averages.iter().map(|(_, v)| v.norm());
    let min_abs = abs.clone().fold(T::infinity(), T::min);
    let max_abs = abs.fold(T::zero(), T::max);
    let mut oscillation = T::zero();
    for (i, (_, u)) in averages.iter().enumerate() {
        for (_, v) in &averages[i + 1..] {
            oscillation = oscillation.max((*u - *v).norm());
        }
    }
    Ok(IrregularityReport { averages, min_abs, max_abs, oscillation, generic: orbit.generic })
}
