use bell_core::behavior::{local_decomposition, no_signaling_report};
use bell_core::network::{estimate_chsh, exact_chsh, exact_joint, sample};
use bell_core::optimizer::{MeasurementSettings, DEFAULT_MAX_ITER, DEFAULT_TOL};
use bell_core::quantum::bilinear;
use bell_core::random;
use bell_core::{
    chsh, chsh_of_settings, classical, correlation, correlation_matrix, correlators, is_local, lhv_behavior,
    model_chsh, no_signaling, pauli_dot, qm_compatible, quantum_behavior, seesaw_maximize, singlet, LhvModel, Stance,
    TSIRELSON_BOUND,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn singlet_correlation_is_minus_dot(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (u, v) = (random::unit_vector(&mut r), random::unit_vector(&mut r));
        let e = correlation(&singlet(), u, v).unwrap();
        prop_assert!((e + u.dot(v)).abs() <= 1e-12);
    }

    #[test]
    fn correlation_matches_tensor_form(seed in any::<u64>()) {
        let mut r = rng(seed);
        let psi = random::pure_state(&mut r);
        let t = correlation_matrix(&psi);
        prop_assert!(t.iter().flatten().all(|v| v.abs() <= 1.0 + 1e-12));
        let (u, v) = (random::unit_vector(&mut r), random::unit_vector(&mut r));
        let direct = correlation(&psi, u, v).unwrap();
        prop_assert!((direct - bilinear(&t, u, v)).abs() <= 1e-12);
        prop_assert!(direct.abs() <= 1.0);
    }

    #[test]
    fn quantum_behaviors_are_consistent(seed in any::<u64>()) {
        let mut r = rng(seed);
        let psi = random::pure_state(&mut r);
        let settings = [(); 4].map(|_| random::unit_vector(&mut r));
        let b = quantum_behavior(&psi, &settings);
        for x in 0..2 {
            for y in 0..2 {
                let block: f64 = b.block(x, y).iter().flatten().sum();
                prop_assert!((block - 1.0).abs() <= 1e-12);
                let e = correlation(&psi, settings[x], settings[2 + y]).unwrap();
                prop_assert!((correlators(&b).get(x, y) - e).abs() <= 1e-12);
            }
        }
        prop_assert!(b.entries().all(|v| v >= 0.0));
        prop_assert!(no_signaling_report(&b).max_residual() <= 1e-12);

        let s = MeasurementSettings::new(settings);
        let via_behavior = chsh(correlators(&b).0).unwrap();
        prop_assert!((chsh_of_settings(&psi, &s).unwrap() - via_behavior).abs() <= 1e-12);
    }

    #[test]
    fn pauli_observables_square_to_identity(seed in any::<u64>()) {
        let v = random::unit_vector(&mut rng(seed));
        let m = *pauli_dot(v).matrix();
        for row in 0..2 {
            for col in 0..2 {
                let sq = m[row][0] * m[0][col] + m[row][1] * m[1][col];
                let id = if row == col { 1.0 } else { 0.0 };
                prop_assert!((sq.re - id).abs() <= 1e-12 && sq.im.abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn model_chsh_paths_agree_and_respect_bound(seed in any::<u64>(), n in 1usize..10) {
        let model = random::lhv_model(&mut rng(seed), n);
        let direct = model_chsh(&model);
        let via_behavior = chsh(correlators(&lhv_behavior(&model)).0).unwrap();
        prop_assert!(direct.abs() <= 2.0 + 1e-12);
        prop_assert!((direct - via_behavior).abs() <= 1e-12);
    }

    #[test]
    fn mixing_models_mixes_behaviors(seed in any::<u64>(), w in 0.0f64..=1.0) {
        let mut r = rng(seed);
        let m1 = random::lhv_model(&mut r, 3);
        let m2 = random::lhv_model(&mut r, 4);
        let mixed = lhv_behavior(&LhvModel::mixture(&m1, &m2, w).unwrap());
        let pointwise = lhv_behavior(&m1).mix(&lhv_behavior(&m2), w);
        prop_assert!(mixed.max_abs_diff(&pointwise) <= 1e-12);
    }

    #[test]
    fn locality_is_relabeling_invariant(seed in any::<u64>(), relabel in any::<[bool; 6]>()) {
        let b = random::no_signaling_behavior(&mut rng(seed));
        let moved = b.relabeled(relabel[0], relabel[1], [relabel[2], relabel[3]], [relabel[4], relabel[5]]);
        prop_assert!(no_signaling(&moved));
        prop_assert_eq!(is_local(&b).unwrap(), is_local(&moved).unwrap());
        prop_assert_eq!(local_decomposition(&b).is_some(), local_decomposition(&moved).is_some());
    }

    #[test]
    fn network_chsh_within_local_bound(seed in any::<u64>(), n in 1usize..8) {
        let spec = random::network_spec(&mut rng(seed), n);
        let b = exact_joint(&spec).conditional_behavior().unwrap();
        let s = correlators(&b).chsh_value();
        prop_assert!((-2.0 - 1e-12..=2.0 + 1e-12).contains(&s));
    }
}

#[test]
fn factorized_behaviors_are_local_by_both_tests() {
    let mut r = rng(1000);
    for _ in 0..1000 {
        let n = r.random_range(1..=6);
        let b = lhv_behavior(&random::lhv_model(&mut r, n));
        assert!(no_signaling(&b));
        assert!(is_local(&b).unwrap());
        let d = local_decomposition(&b).expect("factorized behaviors are local");
        assert!(d.behavior().max_abs_diff(&b) <= 1e-7);
    }
}

#[test]
fn stance_compatibility_is_monotone() {
    for s in Stance::all() {
        assert_eq!(classical(s), !qm_compatible(s));
        if qm_compatible(s) {
            for sub in Stance::all().filter(|t| t.is_subset_of(s)) {
                assert!(qm_compatible(sub));
            }
        }
    }
}

#[test]
fn seesaw_universality_and_multistart() {
    let mut hits = 0;
    for seed in 0..100 {
        let r = seesaw_maximize(&singlet(), seed, DEFAULT_MAX_ITER, DEFAULT_TOL).unwrap();
        if r.best_s.abs() >= TSIRELSON_BOUND - 1e-4 {
            hits += 1;
        }
        assert!(r.history.windows(2).all(|w| w[1] >= w[0] - 1e-12));
    }
    assert!(hits >= 95);

    let mut r = rng(77);
    for seed in 0..1000 {
        let psi = random::pure_state(&mut r);
        let result = seesaw_maximize(&psi, seed, DEFAULT_MAX_ITER, DEFAULT_TOL).unwrap();
        assert!(result.best_s.abs() <= TSIRELSON_BOUND + 1e-9);
        assert!(result.history.windows(2).all(|w| w[1] >= w[0] - 1e-12));
    }
}

/// The estimate from 10⁶ records should beat the one from 10⁴ records in at
/// least 95 of 100 seeded trials. For independent unbiased estimates with a
/// 10:1 stderr ratio the success rate is 1 - (2/π)·atan(0.1) ≈ 0.937, so this
/// threshold is out of reach in expectation; run with `--ignored` to see it.
#[test]
#[ignore = "expected success rate is about 93.7%, below the 95% threshold"]
fn sampling_estimator_is_consistent() {
    let spec = random::network_spec(&mut rng(4242), 4);
    let exact = exact_chsh(&spec);
    let mut better = 0;
    for seed in 0..100 {
        let small = estimate_chsh(&sample(&spec, 10_000, seed).unwrap()).unwrap();
        let large = estimate_chsh(&sample(&spec, 1_000_000, 1_000 + seed).unwrap()).unwrap();
        if (large.s - exact).abs() < (small.s - exact).abs() {
            better += 1;
        }
    }
    println!("large sample closer in {better}/100 trials");
    assert!(better >= 95, "large sample closer in only {better}/100 trials");
}

/// Standardized errors of the estimator should have mean near zero and unit
/// spread at both sample sizes.
#[test]
fn sampling_estimator_is_calibrated() {
    let spec = random::network_spec(&mut rng(4242), 4);
    let exact = exact_chsh(&spec);
    for (n, offset) in [(10_000, 0), (1_000_000, 1_000)] {
        let z: Vec<f64> = (0..100)
            .map(|seed| {
                let e = estimate_chsh(&sample(&spec, n, offset + seed).unwrap()).unwrap();
                (e.s - exact) / e.stderr
            })
            .collect();
        let mean = z.iter().sum::<f64>() / z.len() as f64;
        let var = z.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (z.len() - 1) as f64;
        assert!(mean.abs() < 0.4, "n={n}: mean z {mean}");
        assert!((0.7..1.3).contains(&var.sqrt()), "n={n}: z spread {}", var.sqrt());
    }
}
