use std::f64::consts::PI;
use std::sync::Arc;

use proptest::prelude::*;
use torharm::coords::{to_toroidal, CartesianPoint, ToroidalPoint};
use torharm::special::{
    gamma_half, harmonic_eval, legendre_p_half, legendre_q_half, legendre_zero, oracle_p_half, oracle_q_half,
    oracle_ring_integral, p_half_sequence, p_half_series, whipple_factor, Family, HalfSign, HarmonicSpec, Kind, Parity,
    QCache, SeriesOptions,
};

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

// mpmath legenp/legenq (type 3), 40 digits
const P_3_2_1_AT_1_8: f64 = 3.671832527537225109640386303113416124292;
const Q_1_2_2_AT_1_25: f64 = 4.04582769478939312363435923231802255146;

#[test]
fn oracle_reference_values() {
    assert!(rel(oracle_p_half(2, 1, 1.8).unwrap(), P_3_2_1_AT_1_8) < 1e-15);
    assert!(rel(oracle_q_half(1, 2, 1.25).unwrap(), Q_1_2_2_AT_1_25) < 1e-15);
    assert!(rel(legendre_p_half(2, 1, 1.8, 1e-15).unwrap().value, P_3_2_1_AT_1_8) < 1e-14);
    assert!(rel(legendre_q_half(1, 2, 1.25, 1e-15).unwrap().value, Q_1_2_2_AT_1_25) < 1e-14);
}

#[test]
fn large_order_envelopes() {
    let (n, xi) = (200u32, 0.5f64);
    let x = xi.cosh();
    let nf = n as f64;
    let denom = ((2.0 * nf - 1.0) * xi.sinh()).sqrt();
    let p = p_half_sequence(0, n, x, &SeriesOptions::default()).unwrap()[n as usize].value;
    // ln of e^{n xi} / sqrt(pi (2n-1) sinh xi)
    let ln_p_env = nf * xi - (PI.sqrt() * denom).ln();
    assert!((p.ln_abs() - ln_p_env).exp() - 1.0 < 0.02);
    assert!(1.0 - (p.ln_abs() - ln_p_env).exp() < 0.02);
    let q = legendre_q_half(n, 0, x, 1e-14).unwrap().value;
    let q_env = PI.sqrt() * (-nf * xi).exp() / denom;
    assert!(rel(q, q_env) < 0.02, "{q} {q_env}");
}

#[test]
fn legendre_zero_and_gamma_values() {
    assert_eq!(legendre_zero(0, 0), 1.0);
    assert_eq!(legendre_zero(1, 0), 0.0);
    assert_eq!(legendre_zero(2, 0), -0.5);
    assert!(rel(gamma_half(2, HalfSign::Plus), 0.75 * PI.sqrt()) < 1e-15);
    assert!(rel(gamma_half(2, HalfSign::Minus), 4.0 / 3.0 * PI.sqrt()) < 1e-15);
}

#[test]
fn whipple_consistency_example() {
    let t = to_toroidal(&CartesianPoint::new(0.7, -0.4, 0.35), 1.0).unwrap();
    let std = harmonic_eval(&HarmonicSpec::standard_ring(Parity::Cos, 2, 1), &t, 1.0, 1e-15).unwrap();
    let alt = harmonic_eval(
        &HarmonicSpec::new(Family::Alternate, Kind::Ring, Parity::Cos, 2, 1),
        &t,
        1.0,
        1e-15,
    )
    .unwrap();
    // (-1)^n 2/sqrt(pi)/Γ(n - m + 1/2) with n = 2, m = 1
    let w = 2.0 / PI.sqrt() / (0.5 * PI.sqrt());
    assert!(rel(std.value, w * alt.value) < 1e-10);
    assert!(rel(whipple_factor(Kind::Ring, 2, 1).to_f64(), w) < 1e-15);
}

#[test]
fn ring_charge_examples() {
    let a = 1.0;
    for (m, p, tol) in [
        (0u32, CartesianPoint::new(2.0 * a, 0.0, 0.0), 1e-10),
        (1, CartesianPoint::new(0.3, 1.1, -0.6), 1e-10),
        (2, CartesianPoint::new(0.5 * a, 0.3 * a, 0.2 * a), 1e-9),
    ] {
        let t = to_toroidal(&p, a).unwrap();
        let got = harmonic_eval(&HarmonicSpec::standard_ring(Parity::Cos, 0, m), &t, a, 1e-15).unwrap();
        let want = oracle_ring_integral(m, &p, a, 1e-13).unwrap();
        assert!(rel(got.value, want) < tol, "m={m}: {} {want}", got.value);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn forward_recurrence_matches_series(m in 0u32..6, x in 1.2f64..5.0) {
        let opts = SeriesOptions::default();
        let seq = p_half_sequence(m, 30, x, &opts).unwrap();
        for n in 0..=30u32 {
            let direct = p_half_series(n, m, x, &opts).unwrap().value.to_f64();
            let rec = seq[n as usize].value.to_f64();
            prop_assert!(rel(rec, direct) < 1e-11, "n={} m={} x={}: {} {}", n, m, x, rec, direct);
        }
    }

    #[test]
    fn error_estimates_are_consistent(
        family in prop_oneof![Just(Family::Standard), Just(Family::Alternate)],
        kind in prop_oneof![Just(Kind::Ring), Just(Kind::Axial)],
        parity in prop_oneof![Just(Parity::Cos), Just(Parity::Sin)],
        n in 0u32..7, m in 0u32..5,
        xi in 0.05f64..3.0, eta in -3.1f64..3.1,
        tol in prop_oneof![Just(1e-8), Just(1e-12), Just(1e-15)],
    ) {
        let t = ToroidalPoint::from_toroidal(xi, eta, 0.3, 1.0).unwrap();
        if let Ok(r) = harmonic_eval(&HarmonicSpec::new(family, kind, parity, n, m), &t, 1.0, tol) {
            prop_assert!(r.value.is_finite());
            prop_assert!(r.est_error >= 0.0);
            if r.converged {
                prop_assert!(r.est_error <= tol.max(8.0 * f64::EPSILON));
            }
        }
    }

    #[test]
    fn axial_parity_under_reflection(
        family in prop_oneof![Just(Family::Standard), Just(Family::Alternate)],
        n in 1u32..6, m in 0u32..4,
        rho in 0.2f64..3.0, z in 0.05f64..2.0,
    ) {
        let up = to_toroidal(&CartesianPoint::new(rho, 0.0, z), 1.0).unwrap();
        let down = to_toroidal(&CartesianPoint::new(rho, 0.0, -z), 1.0).unwrap();
        for (parity, sign) in [(Parity::Cos, 1.0), (Parity::Sin, -1.0)] {
            let spec = HarmonicSpec::new(family, Kind::Axial, parity, n, m);
            let a = harmonic_eval(&spec, &up, 1.0, 1e-14).unwrap().value;
            let b = harmonic_eval(&spec, &down, 1.0, 1e-14).unwrap().value;
            prop_assert!((a - sign * b).abs() <= 1e-12 * a.abs().max(1e-300), "{:?}: {} {}", parity, a, b);
        }
    }
}

#[test]
fn q_cache_is_shared_across_threads() {
    let cache = Arc::new(QCache::new());
    let xs = [1.3, 2.0, 4.5];
    std::thread::scope(|s| {
        for _ in 0..8 {
            let cache = Arc::clone(&cache);
            s.spawn(move || {
                for n in 0..10 {
                    for x in xs {
                        let v = cache.get(n, 1, x).unwrap();
                        let direct = legendre_q_half(n, 1, x, 1e-14).unwrap().value;
                        assert!(rel(v.value.to_f64(), direct) < 1e-14);
                    }
                }
            });
        }
    });
    assert_eq!(cache.len(), 30);
}
