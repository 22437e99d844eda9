//! Fitting `|S(N)| ≈ scale · N / (ln N)^A`.

use super::{CorrelationError, CorrelationSeries};
use crate::scalar::Real;
use serde::{Deserialize, Serialize};

pub const DECAY_MODEL: &str = "log(N/|S(N)|) = A*log(log(N)) - log(scale)";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub a_hat: f64,
    pub scale: f64,
    pub residual_rms: f64,
    pub n_min: u64,
    pub n_max: u64,
    pub model: String,
    /// Grid points left out because `|S(N)| = 0` or `N < 2`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub dropped: Vec<u64>,
}

/// Least-squares slope of `log(N/|S(N)|)` against `log log N`.
///
/// Needs at least four usable entries spanning two decades of `N`.
pub fn decay_fit<T: Real>(series: &CorrelationSeries<T>) -> Result<DecayFit, CorrelationError> {
    let mut pts = Vec::new();
    let mut dropped = Vec::new();
    for &(n, v) in series.entries() {
        let a = v.norm().as_f64();
        if n < 2 || a == 0.0 {
            dropped.push(n);
            continue;
        }
        let nf = n as f64;
        pts.push((n, nf.ln().ln(), (nf / a).ln()));
    }
    if pts.len() < 4 {
        return Err(CorrelationError::DegenerateFit(format!("{} usable entries, need 4", pts.len())));
    }
    let (n_min, n_max) = (pts[0].0, pts[pts.len() - 1].0);
    if (n_max as f64) < 100.0 * n_min as f64 {
        return Err(CorrelationError::DegenerateFit(format!("N spans {n_min}..{n_max}, need two decades")));
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.2).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.1 - mx) * (p.1 - mx)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.1 - mx) * (p.2 - my)).sum();
    let a_hat = sxy / sxx;
    let intercept = my - a_hat * mx;
    let ss: f64 = pts.iter().map(|p| (p.2 - a_hat * p.1 - intercept).powi(2)).sum();
    Ok(DecayFit {
        a_hat,
        scale: (-intercept).exp(),
        residual_rms: (ss / k).sqrt(),
        n_min,
        n_max,
        model: DECAY_MODEL.into(),
        dropped,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantBoundReport {
    pub c: f64,
    pub k: usize,
    pub n: u64,
    /// `C^{2(K−1)}`.
    pub lhs: f64,
    /// `ln N`.
    pub rhs: f64,
    pub holds: bool,
}

/// Evaluates `C^{2(K−1)} ≤ ln N` at the given finite parameters.
pub fn constant_bound_diagnostic(c: f64, k: usize, n: u64) -> ConstantBoundReport {
    let lhs = c.powi(2 * (k as i32 - 1));
    let rhs = (n as f64).ln();
    ConstantBoundReport { c, k, n, lhs, rhs, holds: lhs <= rhs }
}
