use proptest::prelude::*;
use zetaps::dirichlet::SignedDirichletPolynomial;
use zetaps::realroots::{
    left_barrier, rho, rho_table, right_barrier, scaled_value, verify_bracket, KSpec, RootConfig, Verdict,
};

/// Bisection in doubles on `4^t - 3^t - 2^t - 1`, which is `zeta_{4,3}(-t)`.
fn rho_4_3_oracle() -> f64 {
    let f = |t: f64| 4f64.powf(t) - 3f64.powf(t) - 2f64.powf(t) - 1.0;
    let (mut lo, mut hi) = (3.0, 1.0);
    assert!(f(lo) > 0.0 && f(hi) < 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    -0.5 * (lo + hi)
}

#[test]
fn rho_4_3_matches_bisection_oracle() {
    let r = rho(4, 3, &RootConfig::default()).unwrap();
    assert!((r.rho() - rho_4_3_oracle()).abs() < 5e-3);
    assert!((r.rho() - rho_4_3_oracle()).abs() < 1e-8);
}

#[test]
fn monotone_in_k() {
    let cfg = RootConfig::default();
    for n in 2..=14u64 {
        let rhos: Vec<f64> = (1..n).map(|k| rho(n, k, &cfg).unwrap().rho()).collect();
        for w in rhos.windows(2) {
            assert!(w[1] <= w[0] + 1e-8, "n={n}: {rhos:?}");
        }
    }
}

#[test]
fn brackets_reverify_at_double_precision() {
    let cfg = RootConfig::default();
    for n in 2..=12u64 {
        for k in 1..n {
            let r = rho(n, k, &cfg).unwrap();
            let Verdict::Root { value, lo, hi } = r.verdict else { continue };
            assert!(value > left_barrier(n) && value < right_barrier(n));
            assert!(hi - lo <= 2.0 * cfg.tolerance);
            let p = SignedDirichletPolynomial::zeta_nk(n, k).unwrap();
            // exact zeros sit on a bracket endpoint's neighbourhood; widen slightly
            let ok = verify_bracket(&p, lo, hi, &cfg.policy.doubled()).unwrap()
                || verify_bracket(&p, lo - 1e-9, hi + 1e-9, &cfg.policy.doubled()).unwrap();
            assert!(ok, "n={n} k={k} [{lo}, {hi}]");
        }
    }
}

#[test]
fn exactness_anchors_inside_brackets() {
    let cfg = RootConfig::default();
    let (lo, hi) = rho(3, 2, &cfg).unwrap().bracket().unwrap();
    assert!(lo <= -1.0 && -1.0 <= hi);
    let (lo, hi) = rho(2, 1, &cfg).unwrap().bracket().unwrap();
    assert!(lo <= 0.0 && 0.0 <= hi);
}

#[test]
fn full_table_at_hundred() {
    let rows = rho_table(KSpec::Full, 100, 100, 1, &RootConfig::default()).unwrap();
    let q = rows[0].rho_over_n();
    assert!((-0.72..=-0.66).contains(&q), "{q}");
}

#[test]
fn k_one_rows_have_no_real_zero() {
    let rows = rho_table(KSpec::Fixed(1), 20, 80, 20, &RootConfig::default()).unwrap();
    assert!(rows.iter().all(|r| r.rho() == f64::INFINITY));
}

#[test]
fn tables_are_schedule_independent() {
    let cfg = RootConfig::default();
    let a = rho_table(KSpec::Full, 2, 30, 1, &cfg).unwrap();
    let serial: Vec<f64> = (2..=30).map(|n| rho(n, n - 1, &cfg).unwrap().rho()).collect();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let b = pool.install(|| rho_table(KSpec::Full, 2, 30, 1, &cfg).unwrap());
    for ((x, y), z) in a.iter().zip(&b).zip(&serial) {
        assert_eq!(x.rho().to_bits(), y.rho().to_bits());
        assert_eq!(x.rho().to_bits(), z.to_bits());
    }
}

#[test]
fn scaled_values_approach_limit() {
    assert!(scaled_value(1000, 30, 1.0, 256).unwrap().abs_err < 0.01);
    assert!(scaled_value(1000, 30, 2.0, 256).unwrap().abs_err < 0.01);
    assert!(scaled_value(2000, 50, std::f64::consts::LN_2, 256).unwrap().value.abs() < 0.05);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn roots_lie_between_barriers(n in 2u64..40, k_frac in 0.0f64..1.0) {
        let k = 1 + (((n - 1) as f64 * k_frac) as u64).min(n - 2);
        let r = rho(n, k, &RootConfig::default()).unwrap();
        if r.is_root() {
            prop_assert!(r.rho() > left_barrier(n) && r.rho() < right_barrier(n));
        }
    }
}
