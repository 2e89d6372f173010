//! Local hidden variable models and the CHSH bound.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::behavior::{Behavior, Correlators};
use crate::error::{invalid, Result};

/// Prior mass must sum to 1 within this tolerance.
pub const PRIOR_SUM_TOL: f64 = 1e-9;
/// Correlators passed to [`chsh`] may exceed [-1, 1] by this much.
pub const CORRELATOR_RANGE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Plus,
    Minus,
}

impl Outcome {
    pub const BOTH: [Outcome; 2] = [Outcome::Plus, Outcome::Minus];

    pub fn value(self) -> i32 {
        match self {
            Outcome::Plus => 1,
            Outcome::Minus => -1,
        }
    }

    /// 0 for +1, 1 for -1.
    pub fn index(self) -> usize {
        match self {
            Outcome::Plus => 0,
            Outcome::Minus => 1,
        }
    }

    pub fn from_index(i: usize) -> Self {
        if i == 0 {
            Outcome::Plus
        } else {
            Outcome::Minus
        }
    }

    pub fn from_value(v: i64) -> Option<Self> {
        match v {
            1 => Some(Outcome::Plus),
            -1 => Some(Outcome::Minus),
            _ => None,
        }
    }
}

/// Outcome assignments for settings a, a′, b, b′.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DeterministicStrategy {
    pub a: Outcome,
    pub a_prime: Outcome,
    pub b: Outcome,
    pub b_prime: Outcome,
}

impl DeterministicStrategy {
    pub fn new([a, a_prime, b, b_prime]: [Outcome; 4]) -> Self {
        Self { a, a_prime, b, b_prime }
    }

    pub fn outcomes(&self) -> [Outcome; 4] {
        [self.a, self.a_prime, self.b, self.b_prime]
    }

    pub(crate) fn alice_indices(&self) -> [usize; 2] {
        [self.a.index(), self.a_prime.index()]
    }

    pub(crate) fn bob_indices(&self) -> [usize; 2] {
        [self.b.index(), self.b_prime.index()]
    }

    /// S(λ) = A(a)B(b) + A(a)B(b′) + A(a′)B(b) − A(a′)B(b′), in integers.
    pub fn chsh(&self) -> i32 {
        let [a, ap, b, bp] = self.outcomes().map(Outcome::value);
        a * b + a * bp + ap * b - ap * bp
    }
}

/// All 16 deterministic strategies with their CHSH values, in lexicographic
/// order of (a, a′, b, b′) with +1 before −1.
pub fn enumerate_deterministic() -> Vec<(DeterministicStrategy, i32)> {
    (0..16u32)
        .map(|bits| {
            let pick = |k: u32| Outcome::from_index(((bits >> (3 - k)) & 1) as usize);
            let s = DeterministicStrategy::new([pick(0), pick(1), pick(2), pick(3)]);
            (s, s.chsh())
        })
        .collect()
}

/// One hidden-variable value with its prior mass and local response
/// probabilities P(A=+1|x,λ), P(B=+1|y,λ).
#[derive(Debug, Clone, PartialEq)]
pub struct HiddenState {
    pub label: String,
    pub prob: f64,
    pub alice_plus: [f64; 2],
    pub bob_plus: [f64; 2],
}

impl HiddenState {
    pub fn new(label: impl Into<String>, prob: f64, alice_plus: [f64; 2], bob_plus: [f64; 2]) -> Self {
        Self { label: label.into(), prob, alice_plus, bob_plus }
    }

    /// Ā(x,λ) = 2·P(A=+1|x,λ) − 1.
    pub fn alice_mean(&self, x: usize) -> f64 {
        2.0 * self.alice_plus[x] - 1.0
    }

    pub fn bob_mean(&self, y: usize) -> f64 {
        2.0 * self.bob_plus[y] - 1.0
    }

    pub fn alice_prob(&self, x: usize, a: usize) -> f64 {
        if a == 0 {
            self.alice_plus[x]
        } else {
            1.0 - self.alice_plus[x]
        }
    }

    pub fn bob_prob(&self, y: usize, b: usize) -> f64 {
        if b == 0 {
            self.bob_plus[y]
        } else {
            1.0 - self.bob_plus[y]
        }
    }

    /// S(λ) evaluated on the conditional means.
    pub fn chsh(&self) -> f64 {
        let (a, ap) = (self.alice_mean(0), self.alice_mean(1));
        let (b, bp) = (self.bob_mean(0), self.bob_mean(1));
        a * (b + bp) + ap * (b - bp)
    }
}

/// A finite local hidden variable model.
#[derive(Debug, Clone, PartialEq)]
pub struct LhvModel {
    states: Vec<HiddenState>,
}

impl LhvModel {
    /// Validates the model and renormalizes the prior to sum exactly to 1.
    pub fn new(mut states: Vec<HiddenState>) -> Result<Self> {
        if states.is_empty() {
            return Err(invalid("hidden variable domain is empty"));
        }
        let mut total = 0.0;
        for s in &states {
            if !s.prob.is_finite() || s.prob < 0.0 {
                return Err(invalid(format!("lambda '{}' has invalid prior mass {}", s.label, s.prob)));
            }
            for r in s.alice_plus.iter().chain(s.bob_plus.iter()) {
                if !r.is_finite() || !(0.0..=1.0).contains(r) {
                    return Err(invalid(format!("lambda '{}' has response probability {r} outside [0, 1]", s.label)));
                }
            }
            total += s.prob;
        }
        if (total - 1.0).abs() > PRIOR_SUM_TOL {
            return Err(invalid(format!("prior sums to {total}, expected 1")));
        }
        for s in &mut states {
            s.prob /= total;
        }
        Ok(Self { states })
    }

    /// Single hidden value with the given response probabilities.
    pub fn single(alice_plus: [f64; 2], bob_plus: [f64; 2]) -> Self {
        Self::new(alloc::vec![HiddenState::new("0", 1.0, alice_plus, bob_plus)]).expect("responses must lie in [0, 1]")
    }

    pub fn states(&self) -> &[HiddenState] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// The prior mixture `(1 - w)·first + w·second`. Labels are prefixed with
    /// `0:` and `1:` to keep them distinct.
    pub fn mixture(first: &Self, second: &Self, w: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&w) {
            return Err(invalid(format!("mixture weight {w} outside [0, 1]")));
        }
        let tag = |prefix: &str, s: &HiddenState, scale: f64| HiddenState {
            label: format!("{prefix}:{}", s.label),
            prob: s.prob * scale,
            ..s.clone()
        };
        let states = first
            .states
            .iter()
            .map(|s| tag("0", s, 1.0 - w))
            .chain(second.states.iter().map(|s| tag("1", s, w)))
            .collect();
        Self::new(states)
    }
}

/// P(A,B|x,y) = Σ_λ P(λ)·P(A|x,λ)·P(B|y,λ).
pub fn lhv_behavior(model: &LhvModel) -> Behavior {
    let mut p = [[[[0.0; 2]; 2]; 2]; 2];
    for s in &model.states {
        for x in 0..2 {
            for y in 0..2 {
                for a in 0..2 {
                    for b in 0..2 {
                        p[x][y][a][b] += s.prob * s.alice_prob(x, a) * s.bob_prob(y, b);
                    }
                }
            }
        }
    }
    Behavior::from_table_unchecked(p)
}

/// S = E(a,b) + E(a,b′) + E(a′,b) − E(a′,b′), with each correlator checked
/// to lie in [-1, 1].
pub fn chsh(e: [f64; 4]) -> Result<f64> {
    for (i, v) in e.iter().enumerate() {
        if !v.is_finite() || v.abs() > 1.0 + CORRELATOR_RANGE_TOL {
            return Err(invalid(format!("correlator {} = {v} outside [-1, 1]", crate::behavior::BLOCK_LABELS[i])));
        }
    }
    Ok(Correlators(e).chsh_value())
}

/// Σ_λ P(λ)·S(λ) with S(λ) formed from the conditional means.
pub fn model_chsh(model: &LhvModel) -> f64 {
    model.states.iter().map(|s| s.prob * s.chsh()).sum()
}

/// Embeds a deterministic strategy as a one-value model with 0/1 responses.
pub fn strategy_to_model(s: DeterministicStrategy) -> LhvModel {
    let plus = |o: Outcome| if o == Outcome::Plus { 1.0 } else { 0.0 };
    LhvModel {
        states: alloc::vec![HiddenState {
            label: strategy_label(s),
            prob: 1.0,
            alice_plus: [plus(s.a), plus(s.a_prime)],
            bob_plus: [plus(s.b), plus(s.b_prime)],
        }],
    }
}

/// Compact label such as `++-+`.
pub fn strategy_label(s: DeterministicStrategy) -> String {
    s.outcomes().iter().map(|o| if *o == Outcome::Plus { '+' } else { '-' }).collect()
}
