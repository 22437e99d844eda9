//! Distal flows on tori: affine maps, skew products over rotations, and
//! Furstenberg cocycles with their Birkhoff sums.

mod birkhoff;
mod cocycle;
mod fourier;
mod rotation;
mod skew;
mod torus;

pub use birkhoff::birkhoff_average;
pub use cocycle::{
    g_partial, g_partial_at, tower, tower_diagnostic, truncation_cutoff, FurstenbergCocycle, TowerReport,
};
pub use fourier::{fit_k1, AnalyticFourierSeries};
pub use rotation::{CertifiedRotation, RotationPoint};
pub use skew::{irregularity_scan, skew_orbit, Fiber, IrregularityReport, Orbit, PrecisionMode, Rotation, SkewProductMap};
pub use torus::{affine_orbit, charpoly, determinant, is_zero_entropy, AffineTorusMap, TorusPoint};

use crate::confrac::ConfracError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FlowsError {
    #[error(transparent)]
    Confrac(#[from] ConfracError),
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("|ĥ({m})| = {value:e} violates the declared envelope {bound:e}")]
    DecayViolation { m: i64, value: f64, bound: f64 },
    #[error("coefficients are not Hermitian at m = {m}; h would not be real")]
    NotReal { m: i64 },
    #[error("truncation {k} exceeds the certified support {support}")]
    TruncationOutOfRange { k: usize, support: usize },
    #[error("no stored q_k reaches 2 ln N = {two_log_n}")]
    InsufficientQuotients { two_log_n: f64 },
}

impl FlowsError {
    pub fn is_precision(&self) -> bool {
        matches!(
            self,
            FlowsError::Confrac(ConfracError::PrecisionInsufficient { .. } | ConfracError::InsufficientTail { .. })
        )
    }
}
