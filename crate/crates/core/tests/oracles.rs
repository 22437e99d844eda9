//! Library results against independently computed reference values.

mod common;

use common::{bessel_series, euclid, fixed_to_f64, floor_exp, pi_fixed};
use distal_core::confrac::{
    build_liouville_alpha, ceil_exp, delta, expand_real, frac_multiple, ConfracError, PartialQuotients, DEFAULT_Q_CAP,
};
use distal_core::correlation::{bessel_j, phi_bessel_reference, phi_fourier_coeff, DEFAULT_NODES};
use distal_core::sieve::{mertens, mobius_sieve, mobius_single, SieveConfig};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;

fn small(pq: &PartialQuotients) -> Vec<u64> {
    pq.quotients().iter().map(|a| a.to_u64().unwrap()).collect()
}

#[test]
fn pi_expansion_matches_euclid() {
    let bits = 1024;
    let reference = euclid(&pi_fixed(bits), &(BigInt::one() << bits));
    let reference: Vec<u64> = reference.iter().take(20).map(|a| a.to_u64().unwrap()).collect();
    assert_eq!(reference[..5], [3, 7, 15, 1, 292]);

    let pi = BigRational::new(pi_fixed(512), BigInt::one() << 512u32);
    let pq = expand_real(&pi, 19, 256).unwrap();
    assert_eq!(small(&pq), reference);
    assert_eq!(small(&pq), [3, 7, 15, 1, 292, 1, 1, 1, 2, 1, 3, 1, 14, 2, 1, 1, 2, 2, 2, 2]);
}

#[test]
fn golden_ratio_expands_to_ones() {
    let bits = 400u32;
    let sqrt5 = (BigInt::from(5) << (2 * bits)).sqrt();
    let phi = BigRational::new((BigInt::one() << bits) + sqrt5, BigInt::one() << (bits + 1));
    match expand_real(&phi, 1000, 300) {
        Err(ConfracError::PrecisionExhausted { certified, prefix }) => {
            assert!(certified > 150, "only {certified} quotients certified");
            assert!(prefix.quotients().iter().all(|a| a == &BigUint::one()));
        }
        other => panic!("unexpected {other:?}"),
    }
    let d = delta(&PartialQuotients::golden(300), 1, 128).unwrap();
    let phi_f = fixed_to_f64(&((BigInt::one() << bits) + (BigInt::from(5) << (2 * bits)).sqrt()), bits as u64 + 1);
    assert!((d.to_f64() - (phi_f - 2.0)).abs() < 1e-15);
}

#[test]
fn liouville_quotients_from_exact_exponentials() {
    assert_eq!(BigInt::from(ceil_exp(2)), floor_exp(2) + 1);
    assert_eq!(BigInt::from(ceil_exp(17)), floor_exp(17) + 1);
    assert_eq!(floor_exp(17), BigInt::from(24_154_952u64));
    let pq = build_liouville_alpha(DEFAULT_Q_CAP).unwrap();
    assert_eq!(BigInt::from(pq.quotients()[3].clone()), floor_exp(17) + 1);
}

#[test]
fn liouville_delta_from_deepest_convergent() {
    let pq = build_liouville_alpha(DEFAULT_Q_CAP).unwrap();
    let conv = pq.all_convergents();
    let last = &conv[3];
    // |α − l_3/q_3| < 1/(q_3 q_4) with q_4 > e^{q_3}: invisible at this scale
    for k in 1..3 {
        let exact = BigRational::from_integer(conv[k].q.clone()) * BigRational::new(last.l.clone(), last.q.clone())
            - BigRational::from_integer(conv[k].l.clone());
        let reference = exact.to_f64().unwrap();
        let d = delta(&pq, k, 128).unwrap().to_f64();
        assert!((d - reference).abs() <= 1e-15 * reference.abs(), "k = {k}: {d} vs {reference}");
    }
}

#[test]
fn frac_multiple_against_big_rationals() {
    let pq = PartialQuotients::golden(200);
    let conv = pq.all_convergents();
    let deep = BigRational::new(conv[199].l.clone(), conv[199].q.clone());
    for k in [1usize, 5, 20, 40, 60] {
        for n in [1u64, 3, 1000, 987_654_321] {
            let x = BigRational::from_integer(BigInt::from(n) * &conv[k].q) * &deep;
            let f = (&x - x.floor()).to_f64().unwrap();
            let got = frac_multiple(&pq, n, k, 1e-12, 128).unwrap();
            let d = (got.value - f).abs();
            assert!(d.min(1.0 - d) <= got.error + 1e-15, "k = {k}, n = {n}");
        }
    }
}

#[test]
fn bessel_against_power_series() {
    let bits = 320;
    let pi = pi_fixed(bits);
    for &c1 in &[0.5f64, 1.0, 2.0] {
        // 4π·c1 with c1 a small dyadic, exact in fixed point
        let x = (&pi * BigInt::from((8.0 * c1) as i64)) >> 1u32;
        for l in -50i64..=50 {
            let reference = bessel_series(l, &x, bits);
            let lib = bessel_j(l, 4.0 * std::f64::consts::PI * c1);
            assert!((lib - reference).abs() < 1e-12, "J_{l}({c1}·4π): {lib} vs {reference}");
            let coeff = phi_fourier_coeff(c1, l, DEFAULT_NODES).unwrap();
            let want = phi_bessel_reference(c1, l);
            assert!((coeff.value - want).norm() < 1e-9);
            assert!((coeff.value.norm() - reference.abs()).abs() < 1e-9);
        }
    }
}

#[test]
fn mertens_million_by_trial_division() {
    let n = 1_000_000u64;
    let table = mobius_sieve(n, &SieveConfig::default()).unwrap();
    let sieved = mertens(&table, &[n]).unwrap().at(n).unwrap();
    let direct: i64 = (1..=n).into_par_iter().map(|m| mobius_single(m) as i64).sum();
    assert_eq!(sieved, direct);
    assert_eq!(sieved, 212);
}
