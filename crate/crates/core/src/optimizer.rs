//! Maximizing |S| over measurement directions for a fixed two-qubit state.
//!
//! With T the correlation tensor, S = uᵀT(v + v′) + u′ᵀT(v − v′). For fixed
//! Bob directions the optimal Alice directions are the normalized vectors
//! T(v ± v′), and symmetrically for Bob with Tᵀ(u ± u′). Alternating these
//! closed-form updates never decreases S.

use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Result};
use crate::lhv::chsh;
use crate::quantum::{
    bilinear, correlation, correlation_matrix, mat_vec, transpose, SettingVectors, TwoQubitState, UnitVector3,
};
use crate::random::unit_vector as random_unit;

/// Update directions shorter than this are replaced by a random direction.
pub const DEGENERATE_NORM: f64 = 1e-12;
pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementSettings {
    pub alice_u: UnitVector3,
    pub alice_u_prime: UnitVector3,
    pub bob_v: UnitVector3,
    pub bob_v_prime: UnitVector3,
}

impl MeasurementSettings {
    pub fn new(vectors: SettingVectors) -> Self {
        let [alice_u, alice_u_prime, bob_v, bob_v_prime] = vectors;
        Self { alice_u, alice_u_prime, bob_v, bob_v_prime }
    }

    pub fn vectors(&self) -> SettingVectors {
        [self.alice_u, self.alice_u_prime, self.bob_v, self.bob_v_prime]
    }

    /// Rotates Bob's pair about `axis`.
    pub fn with_bob_rotated(&self, axis: UnitVector3, degrees: f64) -> Self {
        Self { bob_v: self.bob_v.rotated(axis, degrees), bob_v_prime: self.bob_v_prime.rotated(axis, degrees), ..*self }
    }
}

/// a = x̂, a′ = ŷ, b = (x̂ + ŷ)/√2, b′ = (x̂ − ŷ)/√2: the planar configuration
/// on which the singlet reaches S = −2√2.
pub fn reference_settings() -> MeasurementSettings {
    MeasurementSettings {
        alice_u: UnitVector3::X,
        alice_u_prime: UnitVector3::Y,
        bob_v: UnitVector3::in_xy_plane(45.0),
        bob_v_prime: UnitVector3::in_xy_plane(-45.0),
    }
}

/// CHSH value from the four quantum correlators.
pub fn chsh_of_settings(psi: &TwoQubitState, s: &MeasurementSettings) -> Result<f64> {
    let e = [
        correlation(psi, s.alice_u, s.bob_v)?,
        correlation(psi, s.alice_u, s.bob_v_prime)?,
        correlation(psi, s.alice_u_prime, s.bob_v)?,
        correlation(psi, s.alice_u_prime, s.bob_v_prime)?,
    ];
    chsh(e)
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationResult {
    /// Signed CHSH value at the returned settings.
    pub best_s: f64,
    pub settings: MeasurementSettings,
    pub iterations: usize,
    pub converged: bool,
    /// Degenerate update directions replaced by seeded random directions.
    pub perturbations: usize,
    /// |S| after the start and after every iteration of the winning run.
    pub history: Vec<f64>,
}

struct Run {
    value: f64,
    settings: SettingVectors,
    iterations: usize,
    converged: bool,
    perturbations: usize,
    history: Vec<f64>,
}

fn objective(t: &[[f64; 3]; 3], v: &SettingVectors) -> f64 {
    bilinear(t, v[0], v[2]) + bilinear(t, v[0], v[3]) + bilinear(t, v[1], v[2]) - bilinear(t, v[1], v[3])
}

fn direction(v: [f64; 3], rng: &mut ChaCha8Rng, perturbations: &mut usize) -> UnitVector3 {
    UnitVector3::normalize(v, DEGENERATE_NORM).unwrap_or_else(|| {
        *perturbations += 1;
        random_unit(rng)
    })
}

fn add(a: UnitVector3, b: UnitVector3) -> [f64; 3] {
    let (a, b) = (a.to_array(), b.to_array());
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn sub(a: UnitVector3, b: UnitVector3) -> [f64; 3] {
    let (a, b) = (a.to_array(), b.to_array());
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn run_seesaw(t: &[[f64; 3]; 3], start: SettingVectors, rng: &mut ChaCha8Rng, max_iter: usize, tol: f64) -> Run {
    let tt = transpose(t);
    let mut v = start;
    let mut perturbations = 0;
    let mut prev = objective(t, &v);
    let mut history = alloc::vec![prev];
    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iter {
        iterations += 1;
        let c = mat_vec(t, add(v[2], v[3]));
        let c_prime = mat_vec(t, sub(v[2], v[3]));
        v[0] = direction(c, rng, &mut perturbations);
        v[1] = direction(c_prime, rng, &mut perturbations);
        let d = mat_vec(&tt, add(v[0], v[1]));
        let d_prime = mat_vec(&tt, sub(v[0], v[1]));
        v[2] = direction(d, rng, &mut perturbations);
        v[3] = direction(d_prime, rng, &mut perturbations);
        let value = objective(t, &v);
        history.push(value);
        if (value - prev).abs() < tol {
            converged = true;
            break;
        }
        prev = value;
    }
    let value = history[history.len() - 1];
    Run { value, settings: v, iterations, converged, perturbations, history }
}

fn check_args(max_iter: usize, tol: f64) -> Result<()> {
    if max_iter == 0 {
        return Err(invalid("maxIter must be at least 1"));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(invalid("tolerance must be positive"));
    }
    Ok(())
}

/// Seesaw maximization of |S| from four seeded uniformly random directions.
pub fn seesaw_maximize(psi: &TwoQubitState, seed: u64, max_iter: usize, tol: f64) -> Result<OptimizationResult> {
    check_args(max_iter, tol)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = [(); 4].map(|_| random_unit(&mut rng));
    Ok(maximize(psi, MeasurementSettings::new(start), &mut rng, max_iter, tol))
}

/// Seesaw maximization from given starting directions; `seed` feeds only
/// the degenerate-direction perturbations.
pub fn seesaw_from(
    psi: &TwoQubitState,
    start: MeasurementSettings,
    seed: u64,
    max_iter: usize,
    tol: f64,
) -> Result<OptimizationResult> {
    check_args(max_iter, tol)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(maximize(psi, start, &mut rng, max_iter, tol))
}

fn maximize(
    psi: &TwoQubitState,
    start: MeasurementSettings,
    rng: &mut ChaCha8Rng,
    max_iter: usize,
    tol: f64,
) -> OptimizationResult {
    let t = correlation_matrix(psi);
    let neg_t = t.map(|row| row.map(|v| -v));
    // Maximize S and -S separately; the larger magnitude wins, +S on ties.
    let plus = run_seesaw(&t, start.vectors(), rng, max_iter, tol);
    let minus = run_seesaw(&neg_t, start.vectors(), rng, max_iter, tol);
    let perturbations = plus.perturbations + minus.perturbations;
    let (run, sign) = if minus.value > plus.value + 1e-12 { (minus, -1.0) } else { (plus, 1.0) };
    OptimizationResult {
        best_s: sign * run.value,
        settings: MeasurementSettings::new(run.settings),
        iterations: run.iterations,
        converged: run.converged,
        perturbations,
        history: run.history,
    }
}

/// Rotation applied to Bob's pair of a base configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub base: MeasurementSettings,
    pub axis: UnitVector3,
    pub from_degrees: f64,
    pub to_degrees: f64,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self { base: reference_settings(), axis: UnitVector3::Z, from_degrees: 0.0, to_degrees: 360.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub theta_degrees: f64,
    pub s: f64,
}

/// S as Bob's pair rotates about the axis, at `steps` evenly spaced angles
/// including both endpoints.
pub fn sweep(psi: &TwoQubitState, spec: &SweepSpec, steps: usize) -> Result<Vec<SweepRow>> {
    if steps < 2 {
        return Err(invalid("sweep needs at least 2 steps"));
    }
    let span = spec.to_degrees - spec.from_degrees;
    (0..steps)
        .map(|i| {
            let theta =
                if i + 1 == steps { spec.to_degrees } else { spec.from_degrees + span * i as f64 / (steps - 1) as f64 };
            let settings = if theta == 0.0 { spec.base } else { spec.base.with_bob_rotated(spec.axis, theta) };
            Ok(SweepRow { theta_degrees: theta, s: chsh_of_settings(psi, &settings)? })
        })
        .collect()
}
