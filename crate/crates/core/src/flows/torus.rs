//! Affine maps `x ↦ Ax + b` of the torus `T^n`.

use super::FlowsError;
use crate::scalar::{frac, Real};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A point of `T^n`, coordinates in `[0, 1)`.
pub type TorusPoint<T> = Vec<T>;

/// Polynomial with integer coefficients, lowest degree first.
type Poly = Vec<BigInt>;

fn trim(p: &mut Poly) {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

/// Characteristic polynomial `det(λI − A)` by Faddeev–LeVerrier. Every
/// division is exact for integer matrices.
pub fn charpoly(a: &[Vec<i64>]) -> Vec<BigInt> {
    let n = a.len();
    let a: Vec<Vec<BigInt>> = a.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
    let mut c = vec![BigInt::zero(); n + 1];
    c[n] = BigInt::one();
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for k in 1..=n {
        // M_k = A·M_{k-1} + c_{n-k+1}·I
        let mut next = vec![vec![BigInt::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = BigInt::zero();
                for (l, row) in m.iter().enumerate() {
                    s += &a[i][l] * &row[j];
                }
                next[i][j] = s;
            }
            next[i][i] += &c[n - k + 1];
        }
        m = next;
        let mut tr = BigInt::zero();
        for i in 0..n {
            for l in 0..n {
                tr += &a[i][l] * &m[l][i];
            }
        }
        c[n - k] = -(tr / BigInt::from(k));
    }
    c
}

/// Exact division by a monic polynomial; `None` if it leaves a remainder.
fn div_exact(p: &Poly, f: &Poly) -> Option<Poly> {
    let (dp, df) = (p.len() - 1, f.len() - 1);
    if dp < df {
        return None;
    }
    let mut r = p.clone();
    let mut q = vec![BigInt::zero(); dp - df + 1];
    for i in (0..=dp - df).rev() {
        let coef = r[i + df].clone();
        if coef.is_zero() {
            continue;
        }
        for (j, fj) in f.iter().enumerate() {
            r[i + j] -= &coef * fj;
        }
        q[i] = coef;
    }
    if r.iter().all(Zero::is_zero) {
        trim(&mut q);
        Some(q)
    } else {
        None
    }
}

/// `Φ_1, …, Φ_m` from `x^m − 1 = Π_{d | m} Φ_d`.
fn cyclotomics(m_max: usize) -> Vec<Poly> {
    let mut out: Vec<Poly> = vec![vec![BigInt::one()]];
    for m in 1..=m_max {
        let mut p = vec![BigInt::zero(); m + 1];
        p[0] = -BigInt::one();
        p[m] = BigInt::one();
        for d in 1..m {
            if m % d == 0 {
                p = div_exact(&p, &out[d]).expect("Φ_d divides x^m − 1");
            }
        }
        out.push(p);
    }
    out
}

fn check_square(a: &[Vec<i64>]) -> Result<usize, FlowsError> {
    let n = a.len();
    if n == 0 || a.iter().any(|r| r.len() != n) {
        return Err(FlowsError::InvalidMap("matrix must be square and non-empty".into()));
    }
    Ok(n)
}

/// True iff every eigenvalue of `A` is a root of unity.
///
/// The characteristic polynomial is divided by `Φ_m` for every `m` with
/// `φ(m) ≤ n`; since `φ(m) ≥ √(m/2)` it suffices to try `m ≤ 2n²`.
pub fn is_zero_entropy(a: &[Vec<i64>]) -> bool {
    let Ok(n) = check_square(a) else {
        return false;
    };
    let mut p = charpoly(a);
    let phis = cyclotomics(2 * n * n);
    for phi in phis.iter().skip(1) {
        while p.len() > 1 {
            match div_exact(&p, phi) {
                Some(q) => p = q,
                None => break,
            }
        }
        if p.len() == 1 {
            break;
        }
    }
    p.len() == 1
}

pub fn determinant(a: &[Vec<i64>]) -> BigInt {
    let c = charpoly(a);
    if a.len().is_multiple_of(2) {
        c[0].clone()
    } else {
        -c[0].clone()
    }
}

/// `T(x) = Ax + b mod 1` with `A ∈ GL(n, Z)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineTorusMap<T> {
    matrix: Vec<Vec<i64>>,
    b: Vec<T>,
    zero_entropy: bool,
}

impl<T: Real> AffineTorusMap<T> {
    pub fn new(matrix: Vec<Vec<i64>>, b: Vec<T>) -> Result<Self, FlowsError> {
        let n = check_square(&matrix)?;
        if b.len() != n {
            return Err(FlowsError::InvalidMap(format!("translation has {} entries, expected {n}", b.len())));
        }
        let det = determinant(&matrix);
        if det.abs() != BigInt::one() {
            return Err(FlowsError::InvalidMap(format!("det A = {det}, expected ±1")));
        }
        let zero_entropy = is_zero_entropy(&matrix);
        let b = b.into_iter().map(frac).collect();
        Ok(AffineTorusMap { matrix, b, zero_entropy })
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn translation(&self) -> &[T] {
        &self.b
    }

    pub fn zero_entropy(&self) -> bool {
        self.zero_entropy
    }

    pub fn determinant(&self) -> i64 {
        determinant(&self.matrix).to_i64().expect("±1")
    }

    pub fn apply(&self, x: &[T]) -> TorusPoint<T> {
        self.matrix
            .iter()
            .zip(&self.b)
            .map(|(row, &b)| {
                let s = row.iter().zip(x).fold(T::zero(), |acc, (&a, &xj)| acc + T::of_i64(a) * xj);
                frac(s + b)
            })
            .collect()
    }
}

/// `x_0, T x_0, …, T^N x_0`.
pub fn affine_orbit<T: Real>(
    map: &AffineTorusMap<T>,
    x0: &[T],
    n: usize,
) -> Result<Vec<TorusPoint<T>>, FlowsError> {
    if x0.len() != map.dim() {
        return Err(FlowsError::InvalidInput(format!("point has {} coordinates, map has {}", x0.len(), map.dim())));
    }
    let mut out = Vec::with_capacity(n + 1);
    out.push(x0.iter().map(|&v| frac(v)).collect::<Vec<T>>());
    for i in 0..n {
        let next = map.apply(&out[i]);
        out.push(next);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(p: &[BigInt]) -> Vec<i64> {
        p.iter().map(|c| c.to_i64().unwrap()).collect()
    }

    #[test]
    fn charpoly_small() {
        assert_eq!(ints(&charpoly(&[vec![2, 1], vec![1, 1]])), [1, -3, 1]);
        assert_eq!(ints(&charpoly(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]])), [-1, 3, -3, 1]);
    }

    #[test]
    fn cyclotomic_table() {
        let phis = cyclotomics(12);
        assert_eq!(ints(&phis[1]), [-1, 1]);
        assert_eq!(ints(&phis[6]), [1, -1, 1]);
        assert_eq!(ints(&phis[12]), [1, 0, -1, 0, 1]);
    }

    #[test]
    fn entropy_examples() {
        assert!(is_zero_entropy(&[vec![1, 0], vec![0, 1]]));
        for c in -5..=5 {
            assert!(is_zero_entropy(&[vec![1, 0], vec![c, 1]]));
        }
        assert!(!is_zero_entropy(&[vec![2, 1], vec![1, 1]]));
        // order-6 rotation
        assert!(is_zero_entropy(&[vec![1, -1], vec![1, 0]]));
        // two coupled quarter turns, charpoly (x² + 1)²
        let a = vec![vec![0, -1, 1, 0], vec![1, 0, 0, 1], vec![0, 0, 0, -1], vec![0, 0, 1, 0]];
        assert!(is_zero_entropy(&a));
    }

    #[test]
    fn rejects_non_unimodular() {
        assert!(AffineTorusMap::new(vec![vec![2, 0], vec![0, 1]], vec![0.0, 0.0]).is_err());
        assert!(AffineTorusMap::new(vec![vec![1, 0]], vec![0.0]).is_err());
        let m = AffineTorusMap::new(vec![vec![0, 1], vec![1, 0]], vec![0.0f64, 0.0]).unwrap();
        assert_eq!(m.determinant(), -1);
        assert!(m.zero_entropy());
    }

    #[test]
    fn orbits() {
        let id = AffineTorusMap::new(vec![vec![1, 0], vec![0, 1]], vec![0.0f64, 0.0]).unwrap();
        let o = affine_orbit(&id, &[0.3, 0.7], 5).unwrap();
        assert!(o.iter().all(|p| p == &vec![0.3, 0.7]));

        let alpha = 0.375f64;
        let rot = AffineTorusMap::new(vec![vec![1]], vec![alpha]).unwrap();
        let o = affine_orbit(&rot, &[0.0], 20).unwrap();
        for (n, p) in o.iter().enumerate() {
            assert_eq!(p[0], frac(n as f64 * alpha));
        }
    }
}
