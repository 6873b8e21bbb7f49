use proptest::prelude::*;
use torharm::coeffs::{build_table, coeff_c, coeff_neg_m, coeff_s, erofeenko_residual, CoeffTable};

fn residual(lhs: f64, a: f64, b: f64) -> f64 {
    let scale = lhs.abs().max(a.abs()).max(b.abs());
    if scale == 0.0 {
        // s^{-m} vanishes identically at k = m - 1
        return 0.0;
    }
    (lhs - a - b).abs() / scale
}

#[test]
fn printed_entries() {
    let t0 = build_table(0, 5, 20).unwrap();
    assert_eq!(t0.big_c(2, 5).to_f64(), 60.75);
    assert_eq!(t0.big_s(2, 3).to_f64(), 28.0);
    for k in 0..=10u32 {
        let kf = k as f64;
        let want = 4.0 * (kf + 1.0) * (2.0 * kf + 1.0) * (kf * kf + kf + 19.0 / 8.0);
        assert!(((t0.big_s(4, k).to_f64() - want) / want).abs() < 1e-12);
    }
    for k in 0..=20u32 {
        let kf = k as f64;
        let want = 2.0
            * (2.0 * kf + 1.0)
            * (4.0 * kf.powi(4) + 8.0 * kf.powi(3) + 109.0 / 4.0 * kf * kf + 93.0 / 4.0 * kf + 945.0 / 64.0);
        assert!(((t0.big_c(5, k).to_f64() - want) / want).abs() < 1e-12);
    }

    // toroidal index first
    let t0 = build_table(0, 20, 3).unwrap();
    let t1 = build_table(1, 20, 3).unwrap();
    for k in 0..=20u32 {
        assert!((coeff_c(&t0, k, 0) - 1.0).abs() < 1e-12);
    }
    assert!((coeff_s(&t0, 3, 1) - 12.0).abs() < 1e-12);
    assert!((coeff_c(&t1, 2, 1) - 7.5).abs() < 1e-12);
    for k in 1..=20u32 {
        assert!((coeff_neg_m(&t1, k, 1).0 - 2.0).abs() < 1e-12, "k={k}");
    }
}

#[test]
fn triangular_examples() {
    assert!(erofeenko_residual(&build_table(0, 5, 5).unwrap(), 2, 3).unwrap() <= 1e-10);
    assert!(erofeenko_residual(&build_table(1, 5, 5).unwrap(), 3, 4).unwrap() <= 1e-10);
}

#[test]
fn growth_is_slower_than_the_polynomial_bound() {
    // for a fixed spherical degree d the toroidal growth exponent stays below 2d + 1
    for m in 0..=3u32 {
        let t = build_table(m, 200, 6).unwrap();
        for d in m..=6u32 {
            for (parity, get) in [
                ("c", CoeffTable::c_ext as fn(&CoeffTable, u32, u32) -> _),
                ("s", CoeffTable::s_ext),
            ] {
                let hi = get(&t, 200, d).ln_abs();
                let lo = get(&t, 100, d).ln_abs();
                let exponent = (hi - lo) / 2f64.ln();
                assert!(exponent < (2 * d + 1) as f64, "{parity} m={m} d={d}: {exponent}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn normalized_recurrence(m in 0u32..6, k in 0u32..40) {
        let t = build_table(m, 60, 40).unwrap();
        let (mf, kf) = (m as f64, k as f64);
        for n in 1..60u32 {
            let nf = n as f64;
            for get in [coeff_c, coeff_s] {
                let lhs = (nf - mf + 0.5) * get(&t, n + 1, k);
                let a = (2.0 * kf + 1.0) * get(&t, n, k);
                let b = (nf + mf - 0.5) * get(&t, n - 1, k);
                prop_assert!(residual(lhs, a, b) <= 1e-12, "n={} m={} k={}", n, m, k);
            }
        }
    }

    #[test]
    fn negative_order_recurrence(m in 1u32..6, k in 0u32..40) {
        let t = build_table(m, 60, 40).unwrap();
        let (mf, kf) = (m as f64, k as f64);
        for n in 1..60u32 {
            let nf = n as f64;
            let (up, mid, down) = (coeff_neg_m(&t, n + 1, k), coeff_neg_m(&t, n, k), coeff_neg_m(&t, n - 1, k));
            for (u, c, d) in [(up.0, mid.0, down.0), (up.1, mid.1, down.1)] {
                let lhs = (nf + mf + 0.5) * u;
                let a = (2.0 * kf + 1.0) * c;
                let b = (nf - mf - 0.5) * d;
                prop_assert!(residual(lhs, a, b) <= 1e-12, "n={} m={} k={}", n, m, k);
            }
        }
    }

    #[test]
    fn triangular_recurrence(m in 0u32..5, n in 1u32..30, k in 1u32..=30) {
        prop_assume!(k >= m);
        let t = build_table(m, 31, 30).unwrap();
        prop_assert!(erofeenko_residual(&t, n, k).unwrap() <= 1e-10);
    }

    #[test]
    fn json_round_trip(m in 0u32..8, n_max in 1u32..40, k_max in 1u32..40, normalized in any::<bool>()) {
        let t = build_table(m, n_max, k_max).unwrap();
        if normalized {
            let back = CoeffTable::from_json(&t.to_json_normalized().unwrap()).unwrap();
            for n in 0..=n_max {
                for k in 0..=k_max {
                    prop_assert_eq!(coeff_c(&back, n, k), coeff_c(&t, n, k));
                    prop_assert_eq!(coeff_s(&back, n, k), coeff_s(&t, n, k));
                }
            }
        } else {
            prop_assert_eq!(CoeffTable::from_json(&t.to_json().unwrap()).unwrap(), t);
        }
    }
}
