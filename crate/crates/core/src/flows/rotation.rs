//! Rotation by a continued-fraction number with certified phases.

use super::FlowsError;
use crate::confrac::dyadic::{Dyadic, Interval};
use crate::confrac::{delta, value_interval, CertifiedPhase, ConfracError, PartialQuotients, Tail, DEFAULT_EPS};
use crate::turn::Turn;
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use std::f64::consts::PI;

/// `s·x_0 + m·α` for a base angle `x_0`.
///
/// Orbit points of `x ↦ ±x + α` have this form, and keeping `(s, m)`
/// symbolic lets `e(q_k x)` be assembled from `e(q_k x_0)` and the
/// certified phase of `δ_k` without ever forming `m·α` in floating point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RotationPoint {
    pub scale: i64,
    pub base: Turn,
    pub steps: i128,
}

impl RotationPoint {
    pub fn at(base: Turn) -> RotationPoint {
        RotationPoint { scale: 1, base, steps: 0 }
    }

    /// `j·α`.
    pub fn orbit(j: i128) -> RotationPoint {
        RotationPoint { scale: 1, base: Turn::ZERO, steps: j }
    }

    pub fn shifted(self, j: i128) -> RotationPoint {
        RotationPoint { steps: self.steps + j, ..self }
    }
}

/// `α` with `e(q_k x)` and `1 − e(q_k α)` available to 64-bit turn
/// accuracy for every `k` whose `δ_k` certifies.
#[derive(Clone, Debug)]
pub struct CertifiedRotation {
    alpha: PartialQuotients,
    precision_bits: u64,
    eps: f64,
    alpha_phase: CertifiedPhase,
    alpha_f64: f64,
    q: Vec<BigInt>,
    q_wrap: Vec<u64>,
    deltas: Vec<CertifiedPhase>,
    delta_f64: Vec<f64>,
}

impl CertifiedRotation {
    /// Certifies `δ_1, δ_2, …` until the stored prefix runs out. A rational
    /// `α = l_J / q_J` has `δ_J = 0` exactly.
    pub fn new(alpha: PartialQuotients, precision_bits: u64) -> Result<Self, FlowsError> {
        if precision_bits < 64 {
            return Err(FlowsError::InvalidInput("precision_bits must be at least 64".into()));
        }
        let len = alpha.len();
        let mut deltas = Vec::new();
        let mut delta_f64 = Vec::new();
        for k in 1..len {
            match delta(&alpha, k, precision_bits) {
                Ok(d) => {
                    deltas.push(CertifiedPhase::from_interval(&d.signed_interval(), precision_bits));
                    delta_f64.push(d.to_f64());
                }
                Err(ConfracError::InsufficientTail { .. }) if alpha.tail() == Tail::Exact && k + 1 == len => {
                    deltas.push(CertifiedPhase::from_interval(&Interval::point(Dyadic::zero()), precision_bits));
                    delta_f64.push(0.0);
                }
                Err(ConfracError::InsufficientTail { .. }) => break,
                Err(e) => return Err(e.into()),
            }
        }
        let iv = value_interval(&alpha, precision_bits);
        let alpha_f64 = iv.mid(64).to_f64();
        let alpha_phase = CertifiedPhase::from_interval(&iv, precision_bits);
        let q = alpha.denominators();
        let modulus = BigInt::from(1u8) << 64;
        let q_wrap = q
            .iter()
            .map(|v| {
                let r: BigInt = v % &modulus;
                r.to_u64().expect("reduced mod 2^64")
            })
            .collect();
        Ok(CertifiedRotation {
            alpha,
            precision_bits,
            eps: DEFAULT_EPS,
            alpha_phase,
            alpha_f64,
            q,
            q_wrap,
            deltas,
            delta_f64,
        })
    }

    /// Accuracy demanded of every phase; the default is `1e-12`.
    pub fn with_eps(mut self, eps: f64) -> Self {
        self.eps = eps;
        self
    }

    pub fn alpha(&self) -> &PartialQuotients {
        &self.alpha
    }

    pub fn alpha_f64(&self) -> f64 {
        self.alpha_f64
    }

    pub fn alpha_phase(&self) -> &CertifiedPhase {
        &self.alpha_phase
    }

    pub fn precision_bits(&self) -> u64 {
        self.precision_bits
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn is_rational(&self) -> bool {
        self.alpha.is_rational()
    }

    /// Largest `k` with a certified `δ_k`.
    pub fn k_support(&self) -> usize {
        self.deltas.len()
    }

    pub fn q(&self, k: usize) -> &BigInt {
        &self.q[k]
    }

    pub fn denominators(&self) -> &[BigInt] {
        &self.q
    }

    /// `δ_k` as a double (zero once it underflows).
    pub fn delta_f64(&self, k: usize) -> f64 {
        self.delta_f64[k - 1]
    }

    pub fn delta_phase(&self, k: usize) -> &CertifiedPhase {
        &self.deltas[k - 1]
    }

    pub(crate) fn check_k(&self, k: usize) -> Result<(), FlowsError> {
        if k > self.k_support() {
            return Err(FlowsError::TruncationOutOfRange { k, support: self.k_support() });
        }
        Ok(())
    }

    /// `p` as a turn, `frac(s·x_0 + m·α)`.
    pub fn point_turn(&self, p: RotationPoint) -> Result<Turn, FlowsError> {
        let t = self.alpha_phase.frac(p.steps, self.eps)?.turn;
        Ok(p.base.times(p.scale) + t)
    }

    /// `q_k·p mod 1`, using `q_k·m·α ≡ m·δ_k`.
    pub fn q_turn(&self, k: usize, p: RotationPoint) -> Result<Turn, FlowsError> {
        self.check_k(k)?;
        let t = self.deltas[k - 1].frac(p.steps, self.eps)?.turn;
        let base = Turn(p.base.0.wrapping_mul(self.q_wrap[k]).wrapping_mul(p.scale as u64));
        Ok(base + t)
    }

    /// `1 − e(δ_k) = 2 sin²(πδ_k) − i sin(2πδ_k)` as `(re, −im)`.
    pub(crate) fn one_minus_e_delta(&self, k: usize) -> (f64, f64) {
        let d = self.deltas[k - 1].turn(1).centered::<f64>();
        let s = (PI * d).sin();
        (2.0 * s * s, (2.0 * PI * d).sin())
    }

    /// Checks that `n·δ_k` stays within `eps` for every `|n| ≤ n_max`.
    pub fn certify_steps(&self, k: usize, n_max: u64) -> Result<(), FlowsError> {
        self.check_k(k)?;
        if n_max.is_zero() {
            return Ok(());
        }
        self.deltas[k - 1].frac(n_max as i128, self.eps)?;
        Ok(())
    }
}
