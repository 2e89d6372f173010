//! The Bell scenario as a Bayesian network over (λ, x, y, A, B).
//!
//! Edges: λ → A, λ → B, x → A, y → B, with λ, x and y as roots. The joint
//! factorizes as P(λ)·P(x)·P(y)·P(A|x,λ)·P(B|y,λ).

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::behavior::{block_label, Behavior, Correlators, BLOCK_LABELS, OUTCOME_VALUES};
use crate::error::{invalid, Error, Result};
use crate::lhv::{chsh, lhv_behavior, LhvModel};

/// Tolerance for normalization of setting priors and raw joint tables.
pub const DISTRIBUTION_TOL: f64 = 1e-9;

/// Identifies the sampling generator and its field-to-stream layout.
/// Datasets produced by different generator versions are not comparable.
pub const GENERATOR_ID: &str = "chacha8/rand_chacha-0.9/streams:lambda=0,x=1,y=2,A=3,B=4/f64=rand-0.9-standard/v1";

const STREAM_LAMBDA: u64 = 0;
const STREAM_X: u64 = 1;
const STREAM_Y: u64 = 2;
const STREAM_A: u64 = 3;
const STREAM_B: u64 = 4;

/// Hidden-variable prior and response tables plus independent setting priors.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkSpec {
    model: LhvModel,
    setting_prior_a: [f64; 2],
    setting_prior_b: [f64; 2],
}

impl NetworkSpec {
    pub fn new(model: LhvModel, setting_prior_a: [f64; 2], setting_prior_b: [f64; 2]) -> Result<Self> {
        Ok(Self {
            model,
            setting_prior_a: check_distribution(setting_prior_a, "settingPriorA")?,
            setting_prior_b: check_distribution(setting_prior_b, "settingPriorB")?,
        })
    }

    /// Uniform setting priors.
    pub fn with_uniform_settings(model: LhvModel) -> Self {
        Self { model, setting_prior_a: [0.5; 2], setting_prior_b: [0.5; 2] }
    }

    pub fn model(&self) -> &LhvModel {
        &self.model
    }

    pub fn setting_prior_a(&self) -> [f64; 2] {
        self.setting_prior_a
    }

    pub fn setting_prior_b(&self) -> [f64; 2] {
        self.setting_prior_b
    }
}

fn check_distribution(p: [f64; 2], name: &str) -> Result<[f64; 2]> {
    if p.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(invalid(format!("{name} has a negative or non-finite entry")));
    }
    let total = p[0] + p[1];
    if (total - 1.0).abs() > DISTRIBUTION_TOL {
        return Err(invalid(format!("{name} sums to {total}, expected 1")));
    }
    Ok([p[0] / total, p[1] / total])
}

/// A joint distribution over (λ, x, y, A, B) with a finite λ domain.
#[derive(Debug, Clone, PartialEq)]
pub struct JointTable {
    labels: Vec<String>,
    p: Vec<f64>,
}

fn joint_index(l: usize, x: usize, y: usize, a: usize, b: usize) -> usize {
    l * 16 + x * 8 + y * 4 + a * 2 + b
}

impl JointTable {
    /// Accepts any nonnegative table of `16 · labels.len()` entries summing
    /// to 1 within [`DISTRIBUTION_TOL`], laid out as `[λ][x][y][A][B]`.
    pub fn from_raw(labels: Vec<String>, p: Vec<f64>) -> Result<Self> {
        if labels.is_empty() {
            return Err(invalid("joint table has an empty lambda domain"));
        }
        if p.len() != labels.len() * 16 {
            return Err(invalid(format!("joint table has {} entries, expected {}", p.len(), labels.len() * 16)));
        }
        if p.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(invalid("joint table has a negative or non-finite entry"));
        }
        let total: f64 = p.iter().sum();
        if (total - 1.0).abs() > DISTRIBUTION_TOL {
            return Err(invalid(format!("joint table sums to {total}, expected 1")));
        }
        Ok(Self { labels, p })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn lambda_count(&self) -> usize {
        self.labels.len()
    }

    pub fn get(&self, l: usize, x: usize, y: usize, a: usize, b: usize) -> f64 {
        self.p[joint_index(l, x, y, a, b)]
    }

    pub fn total(&self) -> f64 {
        self.p.iter().sum()
    }

    fn marginal(&self, mut keep: impl FnMut(usize, usize, usize, usize, usize) -> bool) -> f64 {
        let mut acc = 0.0;
        for l in 0..self.lambda_count() {
            for x in 0..2 {
                for y in 0..2 {
                    for a in 0..2 {
                        for b in 0..2 {
                            if keep(l, x, y, a, b) {
                                acc += self.get(l, x, y, a, b);
                            }
                        }
                    }
                }
            }
        }
        acc
    }

    /// P(x, y) for every setting pair.
    pub fn setting_marginal(&self) -> [[f64; 2]; 2] {
        let mut out = [[0.0; 2]; 2];
        for (x, row) in out.iter_mut().enumerate() {
            for (y, v) in row.iter_mut().enumerate() {
                *v = self.marginal(|_, xx, yy, _, _| xx == x && yy == y);
            }
        }
        out
    }

    /// P(A,B|x,y) with λ marginalized out. Every setting pair needs
    /// positive mass.
    pub fn conditional_behavior(&self) -> Result<Behavior> {
        let settings = self.setting_marginal();
        let mut p = [[[[0.0; 2]; 2]; 2]; 2];
        for x in 0..2 {
            for y in 0..2 {
                let pxy = settings[x][y];
                if pxy <= 0.0 {
                    return Err(invalid(format!("setting pair ({}) has zero probability", block_label(x, y))));
                }
                for a in 0..2 {
                    for b in 0..2 {
                        let mass: f64 = (0..self.lambda_count()).map(|l| self.get(l, x, y, a, b)).sum();
                        p[x][y][a][b] = mass / pxy;
                    }
                }
            }
        }
        Behavior::new(p)
    }
}

/// P(λ,x,y,A,B) = P(λ)·P(x)·P(y)·P(A|x,λ)·P(B|y,λ).
pub fn exact_joint(spec: &NetworkSpec) -> JointTable {
    let states = spec.model.states();
    let mut p = alloc::vec![0.0; states.len() * 16];
    for (l, s) in states.iter().enumerate() {
        for x in 0..2 {
            for y in 0..2 {
                let root = s.prob * spec.setting_prior_a[x] * spec.setting_prior_b[y];
                for a in 0..2 {
                    for b in 0..2 {
                        p[joint_index(l, x, y, a, b)] = root * s.alice_prob(x, a) * s.bob_prob(y, b);
                    }
                }
            }
        }
    }
    JointTable { labels: states.iter().map(|s| s.label.clone()).collect(), p }
}

/// Conditional-independence residuals for the network's Markov condition.
/// Each entry is the maximum absolute deviation, over contexts with positive
/// mass, between a conditional derived from the joint and the product of its
/// factors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarkovReport {
    /// λ, x, y mutually independent: P(λ|x,y) vs P(λ), and P(x,y) vs P(x)P(y).
    pub roots_independent: f64,
    /// A ⊥ {y, B} given (x, λ).
    pub alice_screened: f64,
    /// B ⊥ {x, A} given (y, λ).
    pub bob_screened: f64,
}

impl MarkovReport {
    pub fn max_residual(&self) -> f64 {
        self.roots_independent.max(self.alice_screened).max(self.bob_screened)
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.max_residual() <= tol
    }
}

pub fn verify_markov(spec: &NetworkSpec) -> MarkovReport {
    verify_markov_joint(&exact_joint(spec))
}

/// Checks the Markov condition on an arbitrary joint table.
pub fn verify_markov_joint(joint: &JointTable) -> MarkovReport {
    let n = joint.lambda_count();
    let total = joint.total();
    let settings = joint.setting_marginal();
    let px = [settings[0][0] + settings[0][1], settings[1][0] + settings[1][1]];
    let py = [settings[0][0] + settings[1][0], settings[0][1] + settings[1][1]];
    let lambda: Vec<f64> = (0..n).map(|l| joint.marginal(|ll, _, _, _, _| ll == l) / total).collect();

    let mut roots = 0.0f64;
    for x in 0..2 {
        for y in 0..2 {
            roots = roots.max((settings[x][y] / total - px[x] * py[y] / (total * total)).abs());
            if settings[x][y] <= 0.0 {
                continue;
            }
            for (l, pl) in lambda.iter().enumerate() {
                let cond = joint.marginal(|ll, xx, yy, _, _| ll == l && xx == x && yy == y) / settings[x][y];
                roots = roots.max((cond - pl).abs());
            }
        }
    }

    let mut alice = 0.0f64;
    let mut bob = 0.0f64;
    for l in 0..n {
        for s in 0..2 {
            // Alice: context (x = s, λ = l); the rest is (y, B).
            let ctx = joint.marginal(|ll, xx, _, _, _| ll == l && xx == s);
            if ctx > 0.0 {
                for a in 0..2 {
                    let pa = joint.marginal(|ll, xx, _, aa, _| ll == l && xx == s && aa == a) / ctx;
                    for y in 0..2 {
                        for b in 0..2 {
                            let pyb =
                                joint.marginal(|ll, xx, yy, _, bb| ll == l && xx == s && yy == y && bb == b) / ctx;
                            let both = joint.get(l, s, y, a, b) / ctx;
                            alice = alice.max((both - pa * pyb).abs());
                        }
                    }
                }
            }
            // Bob: context (y = s, λ = l); the rest is (x, A).
            let ctx = joint.marginal(|ll, _, yy, _, _| ll == l && yy == s);
            if ctx > 0.0 {
                for b in 0..2 {
                    let pb = joint.marginal(|ll, _, yy, _, bb| ll == l && yy == s && bb == b) / ctx;
                    for x in 0..2 {
                        for a in 0..2 {
                            let pxa =
                                joint.marginal(|ll, xx, yy, aa, _| ll == l && xx == x && yy == s && aa == a) / ctx;
                            let both = joint.get(l, x, s, a, b) / ctx;
                            bob = bob.max((both - pb * pxa).abs());
                        }
                    }
                }
            }
        }
    }
    MarkovReport { roots_independent: roots, alice_screened: alice, bob_screened: bob }
}

/// One sampled trial. `lambda` indexes [`SampleDataset::labels`]; settings
/// and outcomes use the crate-wide index conventions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleRecord {
    pub lambda: usize,
    pub x: usize,
    pub y: usize,
    pub a: usize,
    pub b: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleDataset {
    labels: Vec<String>,
    records: Vec<SampleRecord>,
    seed: Option<u64>,
    generator: String,
}

impl SampleDataset {
    /// Wraps externally produced records (e.g. read back from CSV).
    pub fn from_records(
        labels: Vec<String>,
        records: Vec<SampleRecord>,
        seed: Option<u64>,
        generator: impl Into<String>,
    ) -> Result<Self> {
        for (i, r) in records.iter().enumerate() {
            if r.lambda >= labels.len() || r.x > 1 || r.y > 1 || r.a > 1 || r.b > 1 {
                return Err(invalid(format!("record {i} lies outside its domain")));
            }
        }
        Ok(Self { labels, records, seed, generator: generator.into() })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn records(&self) -> &[SampleRecord] {
        &self.records
    }

    pub fn count(&self) -> usize {
        self.records.len()
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn generator(&self) -> &str {
        &self.generator
    }
}

fn draw(rng: &mut ChaCha8Rng, weights: impl IntoIterator<Item = f64>) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    let mut last_positive = 0;
    for (i, w) in weights.into_iter().enumerate() {
        if w > 0.0 {
            acc += w;
            last_positive = i;
            if u < acc {
                return i;
            }
        }
    }
    // Rounding left the cumulative mass just below u.
    last_positive
}

/// Ancestral sampling in topological order (λ, x, y, A, B). Each field
/// draws from its own ChaCha stream derived from `seed`, so a record's
/// fields never share random words.
pub fn sample(spec: &NetworkSpec, n: usize, seed: u64) -> Result<SampleDataset> {
    if n == 0 {
        return Err(invalid("sample count must be at least 1"));
    }
    let base = ChaCha8Rng::seed_from_u64(seed);
    let stream = |k: u64| {
        let mut rng = base.clone();
        rng.set_stream(k);
        rng
    };
    let (mut rl, mut rx, mut ry, mut ra, mut rb) =
        (stream(STREAM_LAMBDA), stream(STREAM_X), stream(STREAM_Y), stream(STREAM_A), stream(STREAM_B));
    let states = spec.model.states();
    let mut records = Vec::with_capacity(n);
    for _ in 0..n {
        let lambda = draw(&mut rl, states.iter().map(|s| s.prob));
        let x = draw(&mut rx, spec.setting_prior_a);
        let y = draw(&mut ry, spec.setting_prior_b);
        let s = &states[lambda];
        let a = draw(&mut ra, [s.alice_prob(x, 0), s.alice_prob(x, 1)]);
        let b = draw(&mut rb, [s.bob_prob(y, 0), s.bob_prob(y, 1)]);
        records.push(SampleRecord { lambda, x, y, a, b });
    }
    Ok(SampleDataset {
        labels: states.iter().map(|s| s.label.clone()).collect(),
        records,
        seed: Some(seed),
        generator: GENERATOR_ID.into(),
    })
}

/// Empirical CHSH value with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChshEstimate {
    pub s: f64,
    pub stderr: f64,
    pub correlators: [f64; 4],
    pub per_block_counts: [usize; 4],
}

/// Per-block sample means of A·B combined into S. The standard error is
/// √(Σ var̂/n) with the unbiased per-block variance.
pub fn estimate_chsh(d: &SampleDataset) -> Result<ChshEstimate> {
    let mut counts = [0usize; 4];
    let mut sums = [0.0f64; 4];
    let mut sq = [0.0f64; 4];
    for r in &d.records {
        let k = 2 * r.x + r.y;
        let v = OUTCOME_VALUES[r.a] * OUTCOME_VALUES[r.b];
        counts[k] += 1;
        sums[k] += v;
        sq[k] += v * v;
    }
    let mut e = [0.0; 4];
    let mut var_sum = 0.0;
    for k in 0..4 {
        let n = counts[k];
        if n < 2 {
            return Err(Error::InsufficientData { block: BLOCK_LABELS[k], count: n });
        }
        let nf = n as f64;
        let mean = sums[k] / nf;
        let var = ((sq[k] - nf * mean * mean) / (nf - 1.0)).max(0.0);
        e[k] = mean;
        var_sum += var / nf;
    }
    Ok(ChshEstimate {
        s: Correlators(e).chsh_value(),
        stderr: libm::sqrt(var_sum),
        correlators: e,
        per_block_counts: counts,
    })
}

/// Exact CHSH value of the network's conditional behavior.
pub fn exact_chsh(spec: &NetworkSpec) -> f64 {
    let b = lhv_behavior(&spec.model);
    chsh(crate::behavior::correlators(&b).0).unwrap_or_else(|_| unreachable!("correlators are clamped"))
}
