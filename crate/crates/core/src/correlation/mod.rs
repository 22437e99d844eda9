//! Möbius correlations: `S(N)`, `S̃(N)`, Davenport sums, the `φ`
//! coefficients and decay fits.

mod fit;
mod phi;
mod sums;

pub use fit::{constant_bound_diagnostic, decay_fit, ConstantBoundReport, DecayFit, DECAY_MODEL};
pub use phi::{
    aliasing_bound, bessel_j, phi_bessel_reference, phi_coefficient_bound, phi_fourier_coeff, PhiCoefficient,
    DEFAULT_NODES, QUAD_TOLERANCE,
};
pub use sums::{
    davenport_grid, davenport_sum, davenport_sum_turn, furstenberg_s, mobius_correlation, multifreq_davenport,
    s_tilde, sup_davenport, DavenportPeak,
};

use crate::csv::fmt_f64;
use crate::flows::FlowsError;
use crate::scalar::Real;
use crate::sieve::{MertensSeries, SieveError};
use num_complex::Complex;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CorrelationError {
    #[error(transparent)]
    Sieve(#[from] SieveError),
    #[error(transparent)]
    Flows(#[from] FlowsError),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("quadrature on {nodes} nodes only reaches {bound:e}")]
    QuadratureNotConverged { nodes: usize, bound: f64 },
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),
}

impl CorrelationError {
    pub fn is_precision(&self) -> bool {
        match self {
            CorrelationError::Flows(e) => e.is_precision(),
            CorrelationError::QuadratureNotConverged { .. } => true,
            _ => false,
        }
    }
}

/// Sampled `(N, S(N))` with strictly increasing `N` and `|S(N)| ≤ N`.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationSeries<T> {
    entries: Vec<(u64, Complex<T>)>,
    meta: String,
}

impl<T: Real> CorrelationSeries<T> {
    pub fn new(entries: Vec<(u64, Complex<T>)>, meta: impl Into<String>) -> Result<Self, CorrelationError> {
        if entries.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(CorrelationError::InvalidInput("N must be strictly increasing".into()));
        }
        let slack = T::one() + T::of(1e-9);
        if let Some((n, _)) = entries.iter().find(|(n, v)| v.norm() > T::of(*n as f64) * slack) {
            return Err(CorrelationError::InvalidInput(format!("|S({n})| exceeds {n}")));
        }
        Ok(CorrelationSeries { entries, meta: meta.into() })
    }

    /// The series `M(N) + 0i`.
    pub fn from_mertens(m: &MertensSeries) -> Result<Self, CorrelationError> {
        let entries = m.checkpoints.iter().map(|&(n, v)| (n, Complex::new(T::of_i64(v), T::zero()))).collect();
        CorrelationSeries::new(entries, "M(N)")
    }

    pub fn entries(&self) -> &[(u64, Complex<T>)] {
        &self.entries
    }

    pub fn meta(&self) -> &str {
        &self.meta
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `|S(N)| / N` per entry.
    pub fn normalized(&self) -> Vec<f64> {
        self.entries.iter().map(|(n, v)| v.norm().as_f64() / *n as f64).collect()
    }

    /// `N,re_S,im_S,abs_S,abs_S_over_N`, ascending `N`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("N,re_S,im_S,abs_S,abs_S_over_N\n");
        for (n, v) in &self.entries {
            let abs = v.norm().as_f64();
            out.push_str(&format!(
                "{n},{},{},{},{}\n",
                fmt_f64(v.re.as_f64()),
                fmt_f64(v.im.as_f64()),
                fmt_f64(abs),
                fmt_f64(abs / *n as f64)
            ));
        }
        out
    }
}
