//! Birkhoff averages.

use super::FlowsError;
use crate::scalar::Real;
use crate::summation::pairwise;
use num_complex::Complex;

/// `(1/N) Σ_{n≤N} ξ(n)` for `ξ(1..=N)` given in order.
pub fn birkhoff_average<T: Real>(values: &[Complex<T>]) -> Result<Complex<T>, FlowsError> {
    if values.is_empty() {
        return Err(FlowsError::InvalidInput("need at least one value".into()));
    }
    Ok(pairwise(values) / T::of(values.len() as f64))
}
