//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Runs under `cargo test` with `harness = false`.

use std::time::{Duration, Instant};

use bell_core::behavior::local_decomposition;
use bell_core::heptalemma::{lookup, Thesis};
use bell_core::network::{estimate_chsh, exact_chsh, exact_joint, sample, verify_markov};
use bell_core::optimizer::{DEFAULT_MAX_ITER, DEFAULT_TOL};
use bell_core::random;
use bell_core::{
    chsh_of_settings, classical, correlation, correlators, enumerate_deterministic, is_local, lhv_behavior, model_chsh,
    nonlocal_witness, qm_compatible, quantum_behavior, reference_settings, seesaw_maximize, singlet,
    superdeterministic_witness, taxonomy, Behavior, Stance, TSIRELSON_BOUND,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn singlet_behavior() -> Behavior {
    quantum_behavior(&singlet(), &reference_settings().vectors())
}

/// 16 strategies, every |S| exactly 2 in integer arithmetic, under 1 ms.
fn deterministic_bound() -> Outcome {
    // Warm the allocator so the timing measures the enumeration itself.
    let _ = enumerate_deterministic();
    let start = Instant::now();
    let all = enumerate_deterministic();
    let elapsed = start.elapsed();
    let all_two = all.iter().all(|(_, s)| s.abs() == 2);
    verdict(
        all.len() == 16 && all_two && elapsed < Duration::from_millis(1),
        format!("{} strategies, all |S| = 2: {all_two}, {elapsed:?}", all.len()),
    )
}

/// 10 000 random models, |S| ≤ 2 + 1e-12, under 1 s.
fn stochastic_bound() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC45);
    let start = Instant::now();
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let n = rng.random_range(1..=8);
        let model = random::lhv_model(&mut rng, n);
        worst = worst.max(model_chsh(&model).abs());
    }
    let elapsed = start.elapsed();
    verdict(worst <= 2.0 + 1e-12 && elapsed < Duration::from_secs(1), format!("max |S| = {worst:.15}, {elapsed:?}"))
}

/// 1000 random pairs, |E + u·v| ≤ 1e-12.
fn singlet_law() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5117);
    let psi = singlet();
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let u = random::unit_vector(&mut rng);
        let v = random::unit_vector(&mut rng);
        let e = correlation(&psi, u, v).expect("real expectation");
        worst = worst.max((e + u.dot(v)).abs());
    }
    verdict(worst <= 1e-12, format!("max |E + u·v| = {worst:.3e}"))
}

/// S = −2√2 at the planar reference vectors, within 1e-12.
fn explicit_violation() -> Outcome {
    let s = chsh_of_settings(&singlet(), &reference_settings()).expect("valid settings");
    let err = (s + TSIRELSON_BOUND).abs();
    verdict(err <= 1e-12, format!("S = {s:.15}, |S + 2√2| = {err:.3e}"))
}

/// ≥ 95 of 100 seeds reach |S| ≥ 2√2 − 1e-4, each run under 10 ms; no
/// converged run on 1000 random states exceeds 2√2 + 1e-9.
fn tsirelson_recovery() -> Outcome {
    let psi = singlet();
    let mut hits = 0;
    let mut slowest = Duration::ZERO;
    for seed in 0..100 {
        let start = Instant::now();
        let r = seesaw_maximize(&psi, seed, DEFAULT_MAX_ITER, DEFAULT_TOL).expect("valid args");
        slowest = slowest.max(start.elapsed());
        if r.best_s.abs() >= TSIRELSON_BOUND - 1e-4 {
            hits += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x751);
    let mut worst = 0.0f64;
    let mut converged = 0;
    for i in 0..1000 {
        let state = random::pure_state(&mut rng);
        let r = seesaw_maximize(&state, 10_000 + i, DEFAULT_MAX_ITER, DEFAULT_TOL).expect("valid args");
        if r.converged {
            converged += 1;
            worst = worst.max(r.best_s.abs());
        }
    }
    verdict(
        hits >= 95 && slowest < Duration::from_millis(10) && worst <= TSIRELSON_BOUND + 1e-9,
        format!(
            "{hits}/100 singlet runs at 2√2, slowest {slowest:?}; {converged}/1000 random states converged, max |S| = {worst:.12}"
        ),
    )
}

/// Facet test and vertex-decomposition oracle agree on 1000 random
/// no-signaling behaviors; singlet infeasible, uniform feasible.
fn fine_oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xF1E);
    let mut disagreements = 0;
    let mut local = 0;
    let mut worst_reproduction = 0.0f64;
    for _ in 0..1000 {
        let b = random::no_signaling_behavior(&mut rng);
        let facet = is_local(&b).expect("no-signaling input");
        let decomposition = local_decomposition(&b);
        if facet != decomposition.is_some() {
            disagreements += 1;
        }
        if let Some(d) = decomposition {
            local += 1;
            worst_reproduction = worst_reproduction.max(d.behavior().max_abs_diff(&b));
        }
    }
    let singlet_infeasible = local_decomposition(&singlet_behavior()).is_none();
    let uniform_feasible = local_decomposition(&Behavior::uniform()).is_some();
    verdict(
        disagreements == 0 && singlet_infeasible && uniform_feasible && worst_reproduction <= 1e-7,
        format!(
            "{disagreements} disagreements ({local}/1000 local, max reproduction error {worst_reproduction:.3e}); singlet infeasible: {singlet_infeasible}; uniform feasible: {uniform_feasible}"
        ),
    )
}

/// 100 random networks: conditional behavior equals the factorized one and
/// Markov residuals vanish (1e-12); sampled S within 5σ in ≥ 99/100 trials.
fn network_factorization() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xBA7E5);
    let mut worst_identity = 0.0f64;
    let mut worst_markov = 0.0f64;
    let mut within = 0;
    for trial in 0..100u64 {
        let n = rng.random_range(1..=6);
        let spec = random::network_spec(&mut rng, n);
        let conditional = exact_joint(&spec).conditional_behavior().expect("positive setting priors");
        worst_identity = worst_identity.max(conditional.max_abs_diff(&lhv_behavior(spec.model())));
        worst_markov = worst_markov.max(verify_markov(&spec).max_residual());

        let data = sample(&spec, 100_000, trial).expect("n ≥ 1");
        let est = estimate_chsh(&data).expect("all blocks populated");
        if (est.s - exact_chsh(&spec)).abs() <= 5.0 * est.stderr {
            within += 1;
        }
    }
    verdict(
        worst_identity <= 1e-12 && worst_markov <= 1e-12 && within >= 99,
        format!(
            "identity error {worst_identity:.3e}, Markov residual {worst_markov:.3e}, {within}/100 estimates within 5σ"
        ),
    )
}

/// Both witnesses reproduce 1000 random behaviors (1e-12), the singlet
/// (S = −2√2 within 1e-9) and the PR box (S = 4 within 1e-12).
fn witness_reproduction() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x3E7);
    let mut worst_nonlocal = 0.0f64;
    let mut worst_superdet = 0.0f64;
    for _ in 0..1000 {
        let b = random::no_signaling_behavior(&mut rng);
        let pa: f64 = rng.random_range(0.05..0.95);
        let pb: f64 = rng.random_range(0.05..0.95);
        let nl = nonlocal_witness(&b).and_then(|w| w.recompose()).expect("no-signaling input");
        let sd = superdeterministic_witness(&b, [pa, 1.0 - pa], [pb, 1.0 - pb])
            .and_then(|w| w.recompose())
            .expect("positive priors");
        worst_nonlocal = worst_nonlocal.max(nl.max_abs_diff(&b));
        worst_superdet = worst_superdet.max(sd.max_abs_diff(&b));
    }

    let mut special = true;
    let mut notes = Vec::new();
    for (name, b, target, tol) in
        [("singlet", singlet_behavior(), -TSIRELSON_BOUND, 1e-9), ("PR box", Behavior::pr_box(), 4.0, 1e-12)]
    {
        let nl = nonlocal_witness(&b).and_then(|w| w.recompose()).expect("no-signaling");
        let sd =
            superdeterministic_witness(&b, [0.5; 2], [0.5; 2]).and_then(|w| w.recompose()).expect("uniform priors");
        for (route, r) in [("nonlocal", nl), ("superdeterministic", sd)] {
            let s = correlators(&r).chsh_value();
            let ok = (s - target).abs() <= tol && r.max_abs_diff(&b) <= 1e-12;
            special &= ok;
            notes.push(format!("{name}/{route} S = {s:.12}"));
        }
    }
    verdict(
        worst_nonlocal <= 1e-12 && worst_superdet <= 1e-12 && special,
        format!(
            "random max error nonlocal {worst_nonlocal:.3e}, superdeterministic {worst_superdet:.3e}; {}",
            notes.join(", ")
        ),
    )
}

/// Table rows cell-for-cell, compatibility and classicality over all stances.
fn taxonomy_fidelity() -> Outcome {
    use Thesis::*;
    let expected: [(&str, Thesis); 19] = [
        ("de Broglie-Bohm", Locality),
        ("Collapse models", Locality),
        ("Wavefunction realism", Locality),
        ("Transactional", Locality),
        ("Indivisible stochastic", Locality),
        ("Superdeterminism", MeasurementIndependence),
        ("Cellular automaton", MeasurementIndependence),
        ("Copenhagen", MeasurementRealism),
        ("Everett", MeasurementRealism),
        ("Quantum Darwinism", MeasurementRealism),
        ("Relational", NonRelationalism),
        ("Pragmatic", NonRelationalism),
        ("Brukner", NonRelationalism),
        ("Quantum logic", NonFragmentation),
        ("Bub-Pitowsky", NonFragmentation),
        ("Sheaf contextual", NonFragmentation),
        ("Fragmentalist QBism", NonFragmentation),
        ("Pluriverse QBism", OneWorld),
        ("Radical single user", NonSolipsism),
    ];
    let rows = taxonomy();
    let cells_match = rows.len() == 19
        && rows.iter().zip(expected.iter()).all(|(r, (name, t))| {
            // Each row marks exactly one of the seven columns.
            let marks = Thesis::ALL.iter().filter(|c| **c == r.rejected).count();
            r.name == *name && r.rejected == *t && marks == 1 && r.stance().len() == 6
        });
    let lookups = lookup("Everett").map(|r| r.rejected) == Some(MeasurementRealism)
        && lookup("Pluriverse QBism").map(|r| r.rejected) == Some(OneWorld);

    let incompatible: Vec<Stance> = Stance::all().filter(|s| !qm_compatible(*s)).collect();
    let only_full = incompatible == [Stance::full()];
    let classical_is_negation = Stance::all().all(|s| classical(s) == !qm_compatible(s));
    let stances = Stance::all().count();
    verdict(
        cells_match && lookups && only_full && classical_is_negation && stances == 128,
        format!(
            "{} rows match: {cells_match}; incompatible stances = {}; classical ⇔ ¬compatible over {stances}: {classical_is_negation}",
            rows.len(),
            incompatible.len()
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 9] = [
        ("AC1 deterministic bound", deterministic_bound),
        ("AC2 stochastic bound", stochastic_bound),
        ("AC3 singlet law", singlet_law),
        ("AC4 explicit violation", explicit_violation),
        ("AC5 Tsirelson recovery", tsirelson_recovery),
        ("AC6 local polytope oracle", fine_oracle_equivalence),
        ("AC7 network factorization", network_factorization),
        ("AC8 witness reproduction", witness_reproduction),
        ("AC9 taxonomy fidelity", taxonomy_fidelity),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let outcome = check();
        let tag = if outcome.passed { "PASS" } else { "FAIL" };
        println!("[{tag}] {name}: {}", outcome.detail);
        if !outcome.passed {
            failed += 1;
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
