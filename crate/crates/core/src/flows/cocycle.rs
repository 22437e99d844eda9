//! Furstenberg-type cocycles `h(x) = Σ_{k≠0} c_k (1 − e(q_k α)) e(q_k x)`.
//!
//! Frequencies are `q_{−k} = −q_k` and `c_{−k} = c_k` with `c_k` real, so
//! the `±k` terms are complex conjugates and `h` is real valued. The
//! classical example `h(x) = Σ (e(q_k α) − 1)/|k| · e(q_k x)` is the
//! instance `c_k = −1/|k|`.

use super::rotation::{CertifiedRotation, RotationPoint};
use super::FlowsError;
use crate::confrac::dyadic::exp_int;
use crate::confrac::dyadic::Dyadic;
use crate::scalar::Real;
use crate::summation;
use crate::turn::Turn;
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use std::sync::Arc;

#[derive(Clone, Debug)]
pub struct FurstenbergCocycle<T> {
    rotation: Arc<CertifiedRotation>,
    /// `c_1, …, c_{K_support}`.
    c: Vec<T>,
    bound: T,
}

impl<T: Real> FurstenbergCocycle<T> {
    /// Coefficients beyond the rotation's certified range are dropped.
    pub fn new(rotation: Arc<CertifiedRotation>, mut c: Vec<T>, bound: T) -> Result<Self, FlowsError> {
        if !(bound >= T::one()) {
            return Err(FlowsError::InvalidInput("coefficient bound C must be at least 1".into()));
        }
        if let Some(k) = c.iter().position(|v| !(v.abs() <= bound)) {
            return Err(FlowsError::InvalidInput(format!("|c_{}| exceeds C", k + 1)));
        }
        c.truncate(rotation.k_support());
        Ok(FurstenbergCocycle { rotation, c, bound })
    }

    /// `c_k = −1/|k|`, `C = 1`.
    pub fn furstenberg(rotation: Arc<CertifiedRotation>) -> Self {
        let c = (1..=rotation.k_support()).map(|k| -T::one() / T::of_i64(k as i64)).collect();
        FurstenbergCocycle::new(rotation, c, T::one()).expect("|c_k| ≤ 1")
    }

    pub fn constant(rotation: Arc<CertifiedRotation>, value: T) -> Result<Self, FlowsError> {
        let c = vec![value; rotation.k_support()];
        FurstenbergCocycle::new(rotation, c, value.abs().max(T::one()))
    }

    pub fn zero(rotation: Arc<CertifiedRotation>) -> Self {
        let c = vec![T::zero(); rotation.k_support()];
        FurstenbergCocycle::new(rotation, c, T::one()).expect("zero coefficients")
    }

    pub fn rotation(&self) -> &Arc<CertifiedRotation> {
        &self.rotation
    }

    /// `c_k` for `k ≠ 0`.
    pub fn c(&self, k: i64) -> T {
        self.c.get(k.unsigned_abs() as usize - 1).copied().unwrap_or(T::zero())
    }

    pub fn coefficients(&self) -> &[T] {
        &self.c
    }

    /// The bound `C` with `|c_k| ≤ C`.
    pub fn bound(&self) -> T {
        self.bound
    }

    pub fn k_support(&self) -> usize {
        self.c.len()
    }

    fn check_k(&self, k: usize) -> Result<(), FlowsError> {
        if k > self.k_support() {
            return Err(FlowsError::TruncationOutOfRange { k, support: self.k_support() });
        }
        Ok(())
    }

    /// `2 Re[c_k (1 − e(δ_k)) e(θ)]`.
    fn term(&self, k: usize, theta: Turn) -> T {
        let (a, b) = self.rotation.one_minus_e_delta(k);
        let (s, co) = (T::TAU() * theta.centered::<T>()).sin_cos();
        T::of(2.0) * self.c[k - 1] * (T::of(a) * co + T::of(b) * s)
    }

    /// `h` truncated to `1 ≤ |k| ≤ K`.
    pub fn h_eval(&self, x: T, k_max: usize) -> Result<T, FlowsError> {
        self.h_at(RotationPoint::at(Turn::from_real(x)), k_max)
    }

    /// `h` at `s·x_0 + m·α`, with `q_k·m·α` taken as `m·δ_k`.
    pub fn h_at(&self, p: RotationPoint, k_max: usize) -> Result<T, FlowsError> {
        self.check_k(k_max)?;
        let mut s = T::zero();
        for k in 1..=k_max {
            s = s + self.term(k, self.rotation.q_turn(k, p)?);
        }
        Ok(s)
    }

    /// Birkhoff sum `Σ_{j<n} h(jα)` evaluated term by term.
    pub fn cocycle_sum_naive(&self, n: u64, k_max: usize) -> Result<T, FlowsError> {
        if n == 0 {
            return Err(FlowsError::InvalidInput("n must be at least 1".into()));
        }
        self.check_k(k_max)?;
        for k in 1..=k_max {
            self.rotation.certify_steps(k, n - 1)?;
        }
        Ok(summation::sum_range(0, n - 1, |j| {
            self.h_at(RotationPoint::orbit(j as i128), k_max).expect("steps certified above")
        }))
    }

    /// The same sum through `Σ_{j<n} e(j q_k α) (1 − e(q_k α)) = 1 − e(n q_k α)`,
    /// i.e. `Σ_{1≤|k|≤K} c_k (1 − e(n δ_k)) = 4 Σ_k c_k sin²(π n δ_k)`.
    pub fn cocycle_sum_telescoped(&self, n: u64, k_max: usize) -> Result<T, FlowsError> {
        if n == 0 {
            return Err(FlowsError::InvalidInput("n must be at least 1".into()));
        }
        self.check_k(k_max)?;
        let mut s = T::zero();
        for k in 1..=k_max {
            let t = self.rotation.delta_phase(k).frac(n as i128, self.rotation.eps())?.turn;
            let sin = (T::PI() * t.centered::<T>()).sin();
            s = s + T::of(4.0) * self.c[k - 1] * sin * sin;
        }
        Ok(s)
    }

    /// `e(Σ_{j<n} h(jα))` as a turn, from the telescoped form.
    pub fn phase_turn(&self, n: u64, k_max: usize) -> Result<Turn, FlowsError> {
        let v = self.cocycle_sum_telescoped(n, k_max)?;
        Ok(Turn::from_real(v))
    }
}

/// `g(x) = Σ_{1≤|k|≤K} e(q_k x)/|k| = 2 Σ_{k≤K} cos(2π q_k x)/k`.
pub fn g_partial<T: Real>(rotation: &CertifiedRotation, x: T, k_max: usize) -> Result<T, FlowsError> {
    g_partial_at(rotation, RotationPoint::at(Turn::from_real(x)), k_max)
}

pub fn g_partial_at<T: Real>(rotation: &CertifiedRotation, p: RotationPoint, k_max: usize) -> Result<T, FlowsError> {
    let mut s = T::zero();
    for k in 1..=k_max {
        let t = rotation.q_turn(k, p)?;
        s = s + T::of(2.0) * t.cos::<T>() / T::of_i64(k as i64);
    }
    Ok(s)
}

/// `e^{q/2} ≥ n`, i.e. `q ≥ 2 ln n`, decided exactly.
fn reaches_two_log(q: &BigInt, n: u64) -> bool {
    if n <= 1 {
        return true;
    }
    // 2 ln n < 89 for every u64
    let Some(q) = q.to_u64().filter(|&q| q < 128) else {
        return true;
    };
    let n2 = Dyadic::from_int(BigInt::from(n) * BigInt::from(n));
    let mut prec = 64;
    loop {
        // e^q is transcendental, so it never equals n²
        let e = exp_int(q, prec);
        if e.lo > n2 {
            return true;
        }
        if e.hi < n2 {
            return false;
        }
        prec *= 2;
    }
}

/// The cut `K = min{k ≥ 1 : q_k ≥ 2 ln N}`, so `q_{K−1} < 2 ln N ≤ q_K`
/// whenever `N ≥ 2`. For `N = 1` this gives `K = 1`.
pub fn truncation_cutoff(q: &[BigInt], n: u64) -> Result<usize, FlowsError> {
    if n == 0 {
        return Err(FlowsError::InvalidInput("N must be at least 1".into()));
    }
    (1..q.len())
        .find(|&k| reaches_two_log(&q[k], n))
        .ok_or(FlowsError::InsufficientQuotients { two_log_n: 2.0 * (n as f64).ln() })
}

/// `exp ∘ … ∘ exp (2)` with `K − 3` exponentials; `None` for `K < 3`.
pub fn tower(k: usize) -> Option<f64> {
    if k < 3 {
        return None;
    }
    Some((3..k).fold(2.0f64, |v, _| v.exp()))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TowerReport {
    pub k: usize,
    pub tower: Option<f64>,
    pub two_log_n: f64,
    pub holds: bool,
}

/// Compares the tower with `2 ln N` at the cutoff for `N`.
pub fn tower_diagnostic(q: &[BigInt], n: u64) -> Result<TowerReport, FlowsError> {
    let k = truncation_cutoff(q, n)?;
    let t = tower(k);
    let two_log_n = 2.0 * (n as f64).ln();
    Ok(TowerReport { k, tower: t, two_log_n, holds: t.is_none_or(|t| t <= two_log_n) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::confrac::{build_liouville_alpha, DEFAULT_Q_CAP};

    fn liouville() -> Arc<CertifiedRotation> {
        Arc::new(CertifiedRotation::new(build_liouville_alpha(DEFAULT_Q_CAP).unwrap(), 128).unwrap())
    }

    #[test]
    fn cutoff_examples() {
        let rot = liouville();
        let q = rot.denominators();
        assert_eq!(truncation_cutoff(q, 1_000_000).unwrap(), 3);
        assert_eq!(truncation_cutoff(q, 1_000).unwrap(), 2);
        assert_eq!(truncation_cutoff(q, 1).unwrap(), 1);
        assert_eq!(truncation_cutoff(q, 2).unwrap(), 1);
        // 2 ln 3 ≈ 2.197 > q_1 = 2
        assert_eq!(truncation_cutoff(q, 3).unwrap(), 2);
        assert!(truncation_cutoff(&q[..3], 1_000_000).is_err());
    }

    #[test]
    fn tower_values() {
        assert_eq!(tower(2), None);
        assert_eq!(tower(3), Some(2.0));
        assert!((tower(4).unwrap() - 2f64.exp()).abs() < 1e-15);
        let r = tower_diagnostic(liouville().denominators(), 1_000_000).unwrap();
        assert_eq!(r.k, 3);
        assert!(r.holds);
    }

    #[test]
    fn zero_cocycle() {
        let h = FurstenbergCocycle::<f64>::zero(liouville());
        assert_eq!(h.h_eval(0.3, 3).unwrap(), 0.0);
        assert_eq!(h.cocycle_sum_telescoped(12345, 3).unwrap(), 0.0);
        assert_eq!(h.cocycle_sum_naive(100, 3).unwrap(), 0.0);
    }

    #[test]
    fn single_term_at_zero() {
        let rot = liouville();
        let h = FurstenbergCocycle::<f64>::furstenberg(rot.clone());
        let d1 = rot.delta_f64(1);
        let expected = -2.0 * (1.0 - (std::f64::consts::TAU * d1).cos());
        assert!((h.h_eval(0.0, 1).unwrap() - expected).abs() < 1e-15);
        assert!((h.cocycle_sum_telescoped(1, 3).unwrap() - h.h_eval(0.0, 3).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn bounds_are_enforced() {
        let rot = liouville();
        assert!(FurstenbergCocycle::new(rot.clone(), vec![2.0f64], 1.5).is_err());
        assert!(FurstenbergCocycle::new(rot.clone(), vec![0.5f64], 0.5).is_err());
        assert!(FurstenbergCocycle::<f64>::furstenberg(rot.clone()).h_eval(0.0, 4).is_err());
        let c = FurstenbergCocycle::constant(rot, 2.5f64).unwrap();
        assert_eq!(c.bound(), 2.5);
        assert_eq!(c.c(-2), 2.5);
    }

    #[test]
    fn f32_instance() {
        let h = FurstenbergCocycle::<f32>::furstenberg(liouville());
        let a = h.cocycle_sum_naive(500, 3).unwrap();
        let b = h.cocycle_sum_telescoped(500, 3).unwrap();
        assert!((a - b).abs() < 1e-3);
    }
}
