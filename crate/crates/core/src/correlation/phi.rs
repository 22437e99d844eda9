//! Fourier coefficients of `e(φ(x))` for `φ(x) = 2c₁ cos(2πx)`.
//!
//! By Jacobi–Anger, `e(2c₁ cos 2πx) = Σ_l i^l J_l(4πc₁) e(lx)`, so
//! `a_l(c₁) = i^l J_l(4πc₁)`.

use super::CorrelationError;
use crate::scalar::Real;
use crate::summation::pairwise;
use crate::turn::Turn;
use num_complex::Complex;
use std::f64::consts::PI;

/// Largest quadrature error bound accepted by [`phi_fourier_coeff`].
pub const QUAD_TOLERANCE: f64 = 1e-12;

/// Default number of trapezoid nodes.
pub const DEFAULT_NODES: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhiCoefficient<T> {
    pub l: i64,
    pub c1: T,
    pub value: Complex<T>,
    /// Bound on `|value − a_l(c₁)|`.
    pub quad_error: f64,
}

/// `ln(x^n / n!)` for `x > 0`.
fn log_power_over_factorial(x: f64, n: u64) -> f64 {
    let mut s = n as f64 * x.ln();
    for k in 2..=n {
        s -= (k as f64).ln();
    }
    s
}

/// `Σ_{m≠0} |a_{l+mM}|` bounded through `|J_n(z)| ≤ (|z|/2)^{|n|} / |n|!`.
pub fn aliasing_bound(c1: f64, l: i64, nodes: usize) -> f64 {
    let half_z = 2.0 * PI * c1.abs();
    if half_z == 0.0 {
        return 0.0;
    }
    let m_len = nodes as i64;
    let mut total = 0.0;
    for sign in [-1i64, 1] {
        let mut m = sign;
        loop {
            let idx = (l + m * m_len).unsigned_abs();
            let term = log_power_over_factorial(half_z, idx).exp();
            total += term;
            // terms decay once idx passes |z|/2; stop when negligible
            if (idx as f64) > half_z && term < 1e-300 {
                break;
            }
            if m.abs() > 1_000_000 {
                return f64::INFINITY;
            }
            m += sign;
        }
    }
    total
}

/// Periodic trapezoid rule for `a_l = ∫_0^1 e(φ(x)) e(−lx) dx` on `M` nodes.
pub fn phi_fourier_coeff<T: Real>(c1: T, l: i64, nodes: usize) -> Result<PhiCoefficient<T>, CorrelationError> {
    if nodes < 16 {
        return Err(CorrelationError::InvalidInput("at least 16 quadrature nodes are required".into()));
    }
    let m = nodes as u64;
    let two_c1 = T::of(2.0) * c1;
    let terms: Vec<Complex<T>> = (0..m)
        .map(|j| {
            let x = Turn::from_ratio(j, m);
            let phase = Turn::from_real(two_c1 * x.cos::<T>()) - x.times(l);
            phase.unit::<T>()
        })
        .collect();
    let value = pairwise(&terms) / T::of(nodes as f64);
    let rounding = 16.0 * T::epsilon().as_f64() * (1.0 + 4.0 * PI * c1.as_f64().abs());
    let quad_error = aliasing_bound(c1.as_f64(), l, nodes) + rounding;
    if !(quad_error <= QUAD_TOLERANCE.max(rounding * 2.0)) {
        return Err(CorrelationError::QuadratureNotConverged { nodes, bound: quad_error });
    }
    Ok(PhiCoefficient { l, c1, value, quad_error })
}

/// `(4π|c₁| + 16π²c₁²) / l²`, from integrating by parts twice:
/// `(e(φ))'' = (2πiφ'' − 4π²φ'²) e(φ)` with `|φ'| ≤ 4π|c₁|`, `|φ''| ≤ 8π²|c₁|`.
pub fn phi_coefficient_bound(c1: f64, l: i64) -> f64 {
    let c = c1.abs();
    (4.0 * PI * c + 16.0 * PI * PI * c * c) / (l * l) as f64
}

/// `J_n(x)` by Miller's backward recurrence normalized with
/// `J_0 + 2 Σ_k J_{2k} = 1`.
pub fn bessel_j(n: i64, x: f64) -> f64 {
    let parity = |k: i64| if k % 2 == 0 { 1.0 } else { -1.0 };
    if n < 0 {
        return parity(n) * bessel_j(-n, x);
    }
    if x < 0.0 {
        return parity(n) * bessel_j(n, -x);
    }
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    let n = n as usize;
    let top = n.max(x.ceil() as usize);
    let start = 2 * ((top + 20 + (160.0 * top as f64).sqrt() as usize) / 2 + 1);
    let (mut j_next, mut j_cur) = (0.0f64, 1e-300f64);
    let mut result = 0.0;
    let mut norm = 0.0;
    for k in (1..=start).rev() {
        let j_prev = 2.0 * k as f64 / x * j_cur - j_next;
        j_next = j_cur;
        j_cur = j_prev;
        if j_cur.abs() > 1e250 {
            j_cur *= 1e-250;
            j_next *= 1e-250;
            result *= 1e-250;
            norm *= 1e-250;
        }
        // j_cur now holds J_{k-1}
        if k - 1 == n {
            result = j_cur;
        }
        if (k - 1) % 2 == 0 && k > 1 {
            norm += 2.0 * j_cur;
        }
    }
    norm += j_cur;
    result / norm
}

/// `i^l J_l(4πc₁)`.
pub fn phi_bessel_reference(c1: f64, l: i64) -> Complex<f64> {
    let j = bessel_j(l, 4.0 * PI * c1);
    match l.rem_euclid(4) {
        0 => Complex::new(j, 0.0),
        1 => Complex::new(0.0, j),
        2 => Complex::new(-j, 0.0),
        _ => Complex::new(0.0, -j),
    }
}
