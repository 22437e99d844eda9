use distal_core::confrac::{build_liouville_alpha, PartialQuotients, DEFAULT_Q_CAP};
use distal_core::flows::*;
use distal_core::scalar::frac;
use distal_core::turn::Turn;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use proptest::prelude::*;
use std::f64::consts::{PI, TAU};
use std::sync::{Arc, OnceLock};

fn liouville() -> Arc<CertifiedRotation> {
    static ROT: OnceLock<Arc<CertifiedRotation>> = OnceLock::new();
    ROT.get_or_init(|| Arc::new(CertifiedRotation::new(build_liouville_alpha(DEFAULT_Q_CAP).unwrap(), 128).unwrap()))
        .clone()
}

fn furstenberg() -> FurstenbergCocycle<f64> {
    FurstenbergCocycle::furstenberg(liouville())
}

type M2 = [[i64; 2]; 2];

fn mul(a: &M2, b: &M2) -> M2 {
    let mut c = [[0i64; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

/// `(A^12 − I)^2 = 0`: every eigenvalue has order dividing 12.
fn unipotent_power(a: &M2) -> bool {
    let mut p = [[1i64, 0], [0, 1]];
    for _ in 0..12 {
        p = mul(&p, a);
    }
    p[0][0] -= 1;
    p[1][1] -= 1;
    mul(&p, &p) == [[0, 0], [0, 0]]
}

/// Both roots of `x² − tx + d` on the unit circle.
fn unit_modulus(a: &M2) -> bool {
    let t = (a[0][0] + a[1][1]) as f64;
    let d = (a[0][0] * a[1][1] - a[0][1] * a[1][0]) as f64;
    let disc = t * t - 4.0 * d;
    if disc < 0.0 {
        (d - 1.0).abs() < 1e-12
    } else {
        let r = disc.sqrt();
        ((t + r) / 2.0).abs().max(((t - r) / 2.0).abs()) < 1.0 + 1e-12
            && ((t + r) / 2.0).abs().min(((t - r) / 2.0).abs()) > 1.0 - 1e-12
    }
}

#[test]
fn zero_entropy_three_ways() {
    let mut hits = 0;
    for e in 0..7i64.pow(4) {
        let v: Vec<i64> = (0..4).map(|i| (e / 7i64.pow(i)) % 7 - 3).collect();
        let a: M2 = [[v[0], v[1]], [v[2], v[3]]];
        let got = is_zero_entropy(&[vec![v[0], v[1]], vec![v[2], v[3]]]);
        assert_eq!(got, unipotent_power(&a), "{a:?}");
        assert_eq!(got, unit_modulus(&a), "{a:?}");
        hits += got as usize;
    }
    assert!(hits > 50);
}

#[test]
fn affine_orbit_closed_form() {
    let alpha = 0.3125f64 + 2f64.powi(-30);
    let map = AffineTorusMap::new(vec![vec![1, 0], vec![1, 1]], vec![alpha, 0.0]).unwrap();
    assert!(map.zero_entropy());
    let orbit = affine_orbit(&map, &[0.0, 0.0], 60).unwrap();
    for (n, p) in orbit.iter().enumerate() {
        let n = n as f64;
        assert_eq!(p[0], frac(n * alpha));
        let want = frac(n * (n - 1.0) / 2.0 * alpha);
        let d = (p[1] - want).abs();
        assert!(d.min(1.0 - d) < 1e-12, "n = {n}");
    }
}

#[test]
fn telescoping_matches_naive() {
    let h = furstenberg();
    for k in 1..=3 {
        for n in [1u64, 2, 17, 1000, 9999] {
            let a = h.cocycle_sum_naive(n, k).unwrap();
            let b = h.cocycle_sum_telescoped(n, k).unwrap();
            assert!((a - b).abs() <= 1e-8, "n = {n}, K = {k}: {a} vs {b}");
        }
    }
    assert_eq!(h.cocycle_sum_naive(1, 3).unwrap(), h.h_eval(0.0, 3).unwrap());
}

#[test]
fn truncation_tail_bound() {
    // truncating at K instead of K + 1 moves the sum by at most 4πC·n·|δ_{K+1}|
    let h = furstenberg();
    let rot = liouville();
    for n in [1u64, 10, 1000, 100_000, 1_000_000] {
        for k in 1..3 {
            let diff = (h.cocycle_sum_telescoped(n, k + 1).unwrap() - h.cocycle_sum_telescoped(n, k).unwrap()).abs();
            let bound = 4.0 * PI * n as f64 * rot.delta_f64(k + 1).abs();
            assert!(diff <= bound * (1.0 + 1e-12), "n = {n}, K = {k}");
            let e_bound = 4.0 * PI * n as f64 * (-(rot.q(k + 1).to_f64().unwrap())).exp();
            assert!(diff <= e_bound * (1.0 + 1e-12));
        }
    }
}

#[test]
fn h_eval_termwise() {
    let h = furstenberg();
    let pq = build_liouville_alpha(DEFAULT_Q_CAP).unwrap();
    let conv = pq.all_convergents();
    let deep = BigRational::new(conv[3].l.clone(), conv[3].q.clone());
    let x = 0.25f64;
    let mut want = 0.0;
    for k in 1..=3usize {
        let qa = BigRational::from_integer(conv[k].q.clone()) * &deep;
        let qa = (&qa - qa.round()).to_f64().unwrap();
        let qx = frac(conv[k].q.to_f64().unwrap() * x);
        for s in [1.0, -1.0] {
            let c = -1.0 / k as f64;
            let one_minus = Complex::new(1.0, 0.0) - Complex::from_polar(1.0, TAU * s * qa);
            want += (one_minus * Complex::from_polar(1.0, TAU * s * qx) * c).re;
        }
    }
    assert!((h.h_eval(x, 3).unwrap() - want).abs() < 1e-14);
}

#[test]
fn g_partial_properties() {
    let rot = liouville();
    for k in 1..=3 {
        let harmonic: f64 = (1..=k).map(|j| 1.0 / j as f64).sum();
        assert!((g_partial(&rot, 0.0f64, k).unwrap() - 2.0 * harmonic).abs() < 1e-14);
    }
    // mean square of g_K is Σ_{1≤|k|≤K} 1/k², which tends to π²/3
    let golden = CertifiedRotation::new(PartialQuotients::golden(200), 128).unwrap();
    for k in [5usize, 10, 20] {
        let m = 1u64 << 16;
        let mean: f64 = (0..m)
            .map(|j| g_partial_at::<f64>(&golden, RotationPoint::at(Turn::from_ratio(j, m)), k).unwrap().powi(2))
            .sum::<f64>()
            / m as f64;
        let sum: f64 = (1..=k).map(|j| 2.0 / (j * j) as f64).sum();
        assert!((mean - sum).abs() < 1e-10, "K = {k}");
        assert!((PI * PI / 3.0 - sum) < 2.0 / k as f64 + 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn telescoping_equivalence(n in 1u64..=10_000, k in 1usize..=3) {
        let h = furstenberg();
        let a = h.cocycle_sum_naive(n, k).unwrap();
        let b = h.cocycle_sum_telescoped(n, k).unwrap();
        prop_assert!((a - b).abs() <= 1e-8);
    }

    #[test]
    fn coboundary_identity(base in any::<u64>(), steps in -100_000i128..100_000, k in 1usize..=3) {
        let rot = liouville();
        let h = furstenberg();
        let p = RotationPoint { scale: 1, base: Turn(base), steps };
        let g1: f64 = g_partial_at(&rot, p.shifted(1), k).unwrap();
        let g0: f64 = g_partial_at(&rot, p, k).unwrap();
        prop_assert!((g1 - g0 - h.h_at(p, k).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn cutoff_brackets_two_log(n in 2u64..u64::MAX) {
        let rot = liouville();
        let q = rot.denominators();
        let k = truncation_cutoff(q, n).unwrap();
        let two_log = 2.0 * (n as f64).ln();
        prop_assert!(q[k].to_f64().unwrap() >= two_log);
        prop_assert!(q[k - 1].to_f64().unwrap() < two_log);
    }

    #[test]
    fn decay_envelope_is_checked(
        mags in proptest::collection::vec(0.0f64..1.0, 1..6),
        tau in 0.1f64..3.0,
        k1 in 0.1f64..2.0,
    ) {
        let m = mags.len() as i64;
        let mut coeffs = vec![Complex::new(0.0, 0.0); (2 * m + 1) as usize];
        for (i, &v) in mags.iter().enumerate() {
            coeffs[(m + 1 + i as i64) as usize] = Complex::new(v, 0.0);
            coeffs[(m - 1 - i as i64) as usize] = Complex::new(v, 0.0);
        }
        let inside = mags.iter().enumerate().all(|(i, &v)| v <= k1 * (-tau * (i + 1) as f64).exp());
        let built = AnalyticFourierSeries::new(coeffs, tau, k1, None);
        // only cases away from the boundary are decisive
        let margin = mags.iter().enumerate().map(|(i, &v)| (v / (k1 * (-tau * (i + 1) as f64).exp()) - 1.0).abs()).fold(f64::INFINITY, f64::min);
        if margin > 1e-9 {
            prop_assert_eq!(built.is_ok(), inside);
        }
    }

    #[test]
    fn skew_fiber_is_birkhoff_sum(x0 in 0u64..u64::MAX, n in 1usize..300) {
        let h = Arc::new(furstenberg());
        let map = SkewProductMap::furstenberg(h.clone(), 3).unwrap();
        let x0t = Turn(x0);
        let o = skew_orbit(&map, (x0t.to_unit_interval(), 0.0), n, PrecisionMode::Extended).unwrap();
        let direct: f64 = (0..n as i128).map(|j| h.h_at(RotationPoint { scale: 1, base: Turn::from_f64(x0t.to_unit_interval()), steps: j }, 3).unwrap()).sum();
        let d = (o.points[n].1 - frac(direct)).abs();
        prop_assert!(d.min(1.0 - d) < 1e-9);
    }
}

#[test]
fn irregularity_report() {
    let map = SkewProductMap::furstenberg(Arc::new(furstenberg()), 3).unwrap();
    let r = irregularity_scan(&map, (0, 1), (0.0, 0.0), &[1000, 10_000, 100_000], PrecisionMode::Extended).unwrap();
    assert_eq!(r.averages.len(), 3);
    assert!(r.generic);
    assert!(r.max_abs <= 1.0 + 1e-12 && r.min_abs <= r.max_abs);
    assert!(r.oscillation <= 2.0 * r.max_abs + 1e-12);
}
