//! Real-analytic functions on the circle given by finitely many Fourier
//! coefficients.

use super::FlowsError;
use crate::scalar::Real;
use crate::turn::Turn;
use num_complex::Complex;

/// `h(x) = Σ_{|m| ≤ M} ĥ(m) e(mx)` with `|ĥ(m)| ≤ K₁ e^{−τ|m|}`, and
/// optionally `|ĥ(m)| ≥ K₂ e^{−τ₂|m|}` on the whole support.
#[derive(Clone, Debug, PartialEq)]
pub struct AnalyticFourierSeries<T> {
    /// `ĥ(−M), …, ĥ(M)`.
    coeffs: Vec<Complex<T>>,
    tau: T,
    k1: T,
    lower: Option<(T, T)>,
}

/// Smallest `K₁` with `|ĥ(m)| ≤ K₁ e^{−τ|m|}` on the given coefficients.
pub fn fit_k1<T: Real>(coeffs: &[Complex<T>], tau: T) -> T {
    let m_max = (coeffs.len() / 2) as i64;
    coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| c.norm() * (tau * T::of_i64((i as i64 - m_max).abs())).exp())
        .fold(T::zero(), T::max)
}

impl<T: Real> AnalyticFourierSeries<T> {
    /// Validates the decay envelope instead of trusting it. `lower` is
    /// `(K₂, τ₂)`.
    pub fn new(coeffs: Vec<Complex<T>>, tau: T, k1: T, lower: Option<(T, T)>) -> Result<Self, FlowsError> {
        if coeffs.len().is_multiple_of(2) {
            return Err(FlowsError::InvalidInput("coefficients must cover −M..=M".into()));
        }
        if !(tau > T::zero()) || !(k1 >= T::zero()) {
            return Err(FlowsError::InvalidInput("need τ > 0 and K₁ ≥ 0".into()));
        }
        let m_max = (coeffs.len() / 2) as i64;
        let scale = coeffs.iter().map(|c| c.norm()).fold(T::zero(), T::max);
        let tol = T::of(64.0) * T::epsilon() * scale;
        for m in 0..=m_max {
            let (p, n) = (coeffs[(m_max + m) as usize], coeffs[(m_max - m) as usize]);
            if (p - n.conj()).norm() > tol {
                return Err(FlowsError::NotReal { m });
            }
        }
        let slack = T::one() + T::of(16.0) * T::epsilon();
        for (i, c) in coeffs.iter().enumerate() {
            let m = i as i64 - m_max;
            let env = (-tau * T::of_i64(m.abs())).exp();
            let bound = k1 * env * slack;
            if c.norm() > bound {
                return Err(FlowsError::DecayViolation { m, value: c.norm().as_f64(), bound: bound.as_f64() });
            }
            if let Some((k2, tau2)) = lower {
                let floor = k2 * (-tau2 * T::of_i64(m.abs())).exp() / slack;
                if c.norm() < floor {
                    return Err(FlowsError::DecayViolation { m, value: c.norm().as_f64(), bound: floor.as_f64() });
                }
            }
        }
        Ok(AnalyticFourierSeries { coeffs, tau, k1, lower })
    }

    /// Same as [`new`](Self::new) with the smallest admissible `K₁`.
    pub fn with_fitted_k1(coeffs: Vec<Complex<T>>, tau: T) -> Result<Self, FlowsError> {
        let k1 = fit_k1(&coeffs, tau);
        AnalyticFourierSeries::new(coeffs, tau, k1, None)
    }

    /// `2a·cos(2πmx)`: coefficients `a` at `±m`.
    pub fn cosine(m: usize, a: T, tau: T) -> Result<Self, FlowsError> {
        let mut coeffs = vec![Complex::new(T::zero(), T::zero()); 2 * m + 1];
        coeffs[0] = Complex::new(a, T::zero());
        coeffs[2 * m] = Complex::new(a, T::zero());
        AnalyticFourierSeries::with_fitted_k1(coeffs, tau)
    }

    pub fn support(&self) -> usize {
        self.coeffs.len() / 2
    }

    pub fn coeff(&self, m: i64) -> Complex<T> {
        let m_max = self.support() as i64;
        if m.abs() > m_max {
            return Complex::new(T::zero(), T::zero());
        }
        self.coeffs[(m + m_max) as usize]
    }

    pub fn tau(&self) -> T {
        self.tau
    }

    pub fn k1(&self) -> T {
        self.k1
    }

    /// `(K₂, τ₂)` when a lower envelope was declared.
    pub fn lower(&self) -> Option<(T, T)> {
        self.lower
    }

    /// `∫h = ĥ(0)`.
    pub fn mean(&self) -> T {
        self.coeff(0).re
    }

    pub fn eval(&self, x: T) -> T {
        self.eval_turn(Turn::from_real(x))
    }

    pub fn eval_turn(&self, x: Turn) -> T {
        let m_max = self.support() as i64;
        let mut s = self.coeff(0).re;
        for m in 1..=m_max {
            let e = x.times(m).unit::<T>();
            let (p, n) = (self.coeff(m), self.coeff(-m));
            s = s + (p * e + n * e.conj()).re;
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn cosine_values() {
        let h = AnalyticFourierSeries::cosine(1, 0.5f64, 1.0).unwrap();
        assert!((h.eval(0.0) - 1.0).abs() < 1e-15);
        assert!((h.eval(0.5) + 1.0).abs() < 1e-15);
        assert!(h.eval(0.25).abs() < 1e-15);
        assert_eq!(h.mean(), 0.0);
    }

    #[test]
    fn rejects_bad_envelopes() {
        let coeffs = vec![c(0.1, 0.0), c(0.0, 0.0), c(0.1, 0.0)];
        assert!(AnalyticFourierSeries::new(coeffs.clone(), 1.0, 0.3, None).is_ok());
        assert!(matches!(
            AnalyticFourierSeries::new(coeffs.clone(), 3.0, 0.3, None),
            Err(FlowsError::DecayViolation { m: -1, .. })
        ));
        assert!(matches!(
            AnalyticFourierSeries::new(coeffs, 1.0, 0.3, Some((0.5, 1.0))),
            Err(FlowsError::DecayViolation { m: -1, .. })
        ));
        let complex = vec![c(0.1, 0.1), c(0.0, 0.0), c(0.1, 0.1)];
        assert!(matches!(AnalyticFourierSeries::new(complex, 1.0, 1.0, None), Err(FlowsError::NotReal { m: 1 })));
    }

    #[test]
    fn fitted_envelope_is_tight() {
        let coeffs: Vec<_> = (-4i32..=4).map(|m| c((-(m.abs() as f64)).exp() * 0.3, 0.0)).collect();
        let k1 = fit_k1(&coeffs, 1.0);
        assert!((k1 - 0.3).abs() < 1e-15);
        let h = AnalyticFourierSeries::with_fitted_k1(coeffs, 1.0).unwrap();
        assert!(h.k1() <= 0.3 + 1e-15);
    }
}
