use distal_core::confrac::{build_liouville_alpha, DEFAULT_Q_CAP};
use distal_core::correlation::*;
use distal_core::flows::{CertifiedRotation, FurstenbergCocycle};
use distal_core::sieve::{mertens, mobius_sieve, MobiusTable, SieveConfig};
use distal_core::turn::Turn;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use proptest::prelude::*;
use std::f64::consts::{PI, TAU};
use std::sync::{Arc, OnceLock};

fn table() -> &'static MobiusTable {
    static T: OnceLock<MobiusTable> = OnceLock::new();
    T.get_or_init(|| mobius_sieve(1_000_000, &SieveConfig::default()).unwrap())
}

fn rotation() -> Arc<CertifiedRotation> {
    Arc::new(CertifiedRotation::new(build_liouville_alpha(DEFAULT_Q_CAP).unwrap(), 128).unwrap())
}

const GRID: [u64; 6] = [1, 10, 1000, 10_000, 100_000, 1_000_000];

#[test]
fn zero_cocycle_is_mertens() {
    let h = FurstenbergCocycle::<f64>::zero(rotation());
    let s = furstenberg_s(&h, table(), &GRID).unwrap();
    let m = CorrelationSeries::<f64>::from_mertens(&mertens(table(), &GRID).unwrap()).unwrap();
    for ((n, a), (_, b)) in s.entries().iter().zip(m.entries()) {
        assert_eq!(a.re.to_bits(), b.re.to_bits(), "N = {n}");
        assert_eq!(a.im, 0.0);
    }
    assert_eq!(s.to_csv(), m.to_csv());
}

#[test]
fn furstenberg_series_bounds() {
    let h = FurstenbergCocycle::<f64>::furstenberg(rotation());
    let s = furstenberg_s(&h, table(), &GRID).unwrap();
    assert!((s.entries()[0].1.norm() - 1.0).abs() < 1e-15);
    for &(n, v) in s.entries() {
        assert!(v.norm() <= n as f64);
        if n >= 3 {
            assert!(s_tilde(&h, table(), n).unwrap().norm() <= n as f64);
        }
    }
    let norm = s.normalized();
    assert!(norm[5] < norm[2]);
}

#[test]
fn s_tilde_with_two_terms_is_the_phi_sum() {
    let h = FurstenbergCocycle::<f64>::furstenberg(rotation());
    let pq = build_liouville_alpha(DEFAULT_Q_CAP).unwrap();
    let conv = pq.all_convergents();
    let alpha = BigRational::new(conv[3].l.clone(), conv[3].q.clone());
    let n_max = 1000u64;
    let mut want = Complex::new(0.0, 0.0);
    for n in 1..=n_max {
        let mu = table().get(n) as f64;
        let x = BigRational::from_integer(&conv[1].q * n) * &alpha;
        let x = (&x - x.floor()).to_f64().unwrap();
        want += Complex::from_polar(mu, TAU * (-2.0 * (TAU * x).cos()));
    }
    let got = s_tilde(&h, table(), n_max).unwrap();
    assert!((got - want).norm() < 1e-9);
}

#[test]
fn s_and_s_tilde_moduli_agree() {
    let rot = rotation();
    let h = FurstenbergCocycle::<f64>::furstenberg(rot.clone());
    let n = 100_000u64;
    let s = furstenberg_s(&h, table(), &[n]).unwrap().entries()[0].1;
    let st = s_tilde(&h, table(), n).unwrap();
    // the |k| = K terms move each phase by at most 4πC·n|δ_K|
    let k = 3;
    let kappa = 8.0 * PI * PI * rot.delta_f64(k).abs() * (n as f64).powi(2);
    assert!((s.norm() - st.norm()).abs() <= kappa + 1e-9);
}

#[test]
fn squarefree_density() {
    let n = 1_000_000;
    let c = mobius_correlation(table(), |m| Complex::new(table().get(m) as f64, 0.0), n).unwrap();
    assert!((c.re - 6.0 / (PI * PI)).abs() < 1e-3);
}

#[test]
fn davenport_peak_is_symmetric() {
    let g = davenport_grid::<f64>(table(), 10_000, 4096).unwrap();
    let peak = sup_davenport::<f64>(table(), 10_000, 4096).unwrap();
    let j = peak.index as usize;
    assert_eq!(g[j].norm(), g[(4096 - j) % 4096].norm());
    assert!(g.iter().all(|v| v.norm() <= peak.value.norm()));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn multifrequency_reduction(
        l in proptest::collection::vec(-50i64..50, 1..5),
        seed in proptest::collection::vec(0u64..1 << 53, 5),
    ) {
        let theta: Vec<f64> = l.iter().zip(&seed).map(|(_, &s)| s as f64 / 2f64.powi(53)).collect();
        let n = 100_000;
        let multi: Complex<f64> = multifreq_davenport(table(), &l, &theta, n).unwrap();
        let mut combined = BigRational::from_integer(0.into());
        for (&li, &t) in l.iter().zip(&theta) {
            combined += BigRational::from_integer(li.into()) * BigRational::from_float(t).unwrap();
        }
        let combined = (&combined - combined.floor()).to_f64().unwrap();
        let single = davenport_sum(table(), combined, n).unwrap();
        prop_assert!((multi - single).norm() <= 1e-10);
    }

    #[test]
    fn conjugate_symmetry(t in any::<u64>(), k in 1u64..1 << 40) {
        let n = 20_000;
        let a: Complex<f64> = davenport_sum_turn(table(), Turn(t), n).unwrap();
        let b: Complex<f64> = davenport_sum_turn(table(), Turn(t.wrapping_neg()), n).unwrap();
        prop_assert_eq!(a, b.conj());
        let theta = k as f64 / 2f64.powi(40);
        let a = davenport_sum(table(), theta, n).unwrap();
        let b = davenport_sum(table(), 1.0 - theta, n).unwrap();
        prop_assert!((a - b.conj()).norm() <= 1e-12);
    }

    #[test]
    fn davenport_triangle_inequality(t in any::<u64>(), n in 1u64..50_000) {
        let v: Complex<f64> = davenport_sum_turn(table(), Turn(t), n).unwrap();
        prop_assert!(v.norm() <= n as f64);
    }

    #[test]
    fn planted_decay(a in 0.0f64..4.0, scale in 0.01f64..1.0) {
        let entries = [1e3f64, 1e4, 1e5, 1e6, 1e7]
            .iter()
            .map(|&n| (n as u64, Complex::new(scale * n / n.ln().powf(a), 0.0)))
            .collect();
        let f = decay_fit(&CorrelationSeries::new(entries, "planted").unwrap()).unwrap();
        prop_assert!((f.a_hat - a).abs() < 1e-6);
        prop_assert!(f.residual_rms < 1e-6);
    }
}
