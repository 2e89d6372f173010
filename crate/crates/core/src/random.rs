//! Seeded generators for models, states and behaviors used in property
//! checks and multi-start runs.

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal, UnitSphere};

use crate::behavior::{correlators, no_signaling_report, Behavior};
use crate::lhv::{enumerate_deterministic, HiddenState, LhvModel};
use crate::network::NetworkSpec;
use crate::quantum::{TwoQubitState, UnitVector3};

pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R) -> UnitVector3 {
    let v: [f64; 3] = UnitSphere.sample(rng);
    UnitVector3::normalize(v, 0.5).expect("sphere samples have unit norm")
}

/// Symmetric Dirichlet with unit concentration (normalized Exp(1) draws).
pub fn flat_dirichlet<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let draws: Vec<f64> = (0..n).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = draws.iter().sum();
    draws.into_iter().map(|d| d / total).collect()
}

/// Model with `n_lambda` hidden values, flat-Dirichlet prior and uniform
/// response probabilities.
pub fn lhv_model<R: Rng + ?Sized>(rng: &mut R, n_lambda: usize) -> LhvModel {
    let prior = flat_dirichlet(rng, n_lambda.max(1));
    let states = prior
        .into_iter()
        .enumerate()
        .map(|(i, p)| HiddenState::new(format!("l{i}"), p, [rng.random(), rng.random()], [rng.random(), rng.random()]))
        .collect();
    LhvModel::new(states).expect("generated model is valid")
}

/// Random model plus setting priors drawn uniformly from [0.1, 0.9].
pub fn network_spec<R: Rng + ?Sized>(rng: &mut R, n_lambda: usize) -> NetworkSpec {
    let model = lhv_model(rng, n_lambda);
    let pa: f64 = rng.random_range(0.1..0.9);
    let pb: f64 = rng.random_range(0.1..0.9);
    NetworkSpec::new(model, [pa, 1.0 - pa], [pb, 1.0 - pb]).expect("generated priors are valid")
}

/// Haar-distributed pure state (normalized complex Gaussian amplitudes).
pub fn pure_state<R: Rng + ?Sized>(rng: &mut R) -> TwoQubitState {
    let amp = [(); 4].map(|_| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex64::new(re, im)
    });
    let norm = libm::sqrt(amp.iter().map(|a| a.norm_sqr()).sum::<f64>());
    TwoQubitState::new(amp.map(|a| a / norm)).expect("normalized amplitudes")
}

/// One of the eight relabeled PR boxes: uniform marginals, correlators ±1
/// with an odd number of minus signs.
pub fn pr_box_variant(index: usize) -> Behavior {
    let mut e = [1.0; 4];
    let flips = index % 8;
    // Choose which odd subset of positions is negated.
    let odd_subsets: [[bool; 4]; 8] = [
        [false, false, false, true],
        [false, false, true, false],
        [false, true, false, false],
        [true, false, false, false],
        [false, true, true, true],
        [true, false, true, true],
        [true, true, false, true],
        [true, true, true, false],
    ];
    for (v, neg) in e.iter_mut().zip(odd_subsets[flips]) {
        if neg {
            *v = -1.0;
        }
    }
    Behavior::from_marginals_and_correlators([0.0; 2], [0.0; 2], e).expect("PR box variant is valid")
}

/// No-signaling behavior drawn as a flat-Dirichlet mixture of the 16 local
/// vertices blended with a random PR box (weight uniform in [0, 1]), then
/// jittered in marginal/correlator coordinates with rejection of any draw
/// that leaves the probability simplex. Roughly half the draws are local.
pub fn no_signaling_behavior<R: Rng + ?Sized>(rng: &mut R) -> Behavior {
    let weights = flat_dirichlet(rng, 16);
    let mut base = [[[[0.0; 2]; 2]; 2]; 2];
    for ((s, _), w) in enumerate_deterministic().into_iter().zip(weights) {
        let d = Behavior::deterministic(s);
        for x in 0..2 {
            for y in 0..2 {
                for a in 0..2 {
                    for b in 0..2 {
                        base[x][y][a][b] += w * d.get(x, y, a, b);
                    }
                }
            }
        }
    }
    let local = Behavior::new(base).expect("mixture of vertices is valid");
    let pr = pr_box_variant(rng.random_range(0..8));
    let t: f64 = rng.random();
    let mixed = local.mix(&pr, t);

    let e = correlators(&mixed).0;
    let alice = [0, 1].map(|x| mixed.alice_marginal(x, 0, 0) - mixed.alice_marginal(x, 0, 1));
    let bob = [0, 1].map(|y| mixed.bob_marginal(0, y, 0) - mixed.bob_marginal(0, y, 1));
    for _ in 0..32 {
        let mut jitter = || rng.random_range(-0.05..0.05);
        let ea = [alice[0] + jitter(), alice[1] + jitter()];
        let eb = [bob[0] + jitter(), bob[1] + jitter()];
        let ee = e.map(|v| v + jitter());
        if let Ok(b) = Behavior::from_marginals_and_correlators(ea, eb, ee) {
            if b.entries().all(|v| v >= 0.0) && no_signaling_report(&b).holds() {
                return b;
            }
        }
    }
    mixed
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::behavior::{is_local, no_signaling};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_behaviors_are_mixed_local_and_nonlocal() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut local = 0;
        for _ in 0..200 {
            let b = no_signaling_behavior(&mut rng);
            assert!(no_signaling(&b));
            if is_local(&b).unwrap() {
                local += 1;
            }
        }
        assert!(local > 40 && local < 160, "{local} local of 200");
    }

    #[test]
    fn pr_variants_reach_four() {
        for i in 0..8 {
            let e = correlators(&pr_box_variant(i));
            let best = e.chsh_variants().iter().map(|v| v.abs()).fold(0.0, f64::max);
            assert_eq!(best, 4.0);
        }
    }

    #[test]
    fn dirichlet_sums_to_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let w = flat_dirichlet(&mut rng, 7);
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(w.iter().all(|v| *v >= 0.0));
    }
}
