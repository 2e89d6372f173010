//! Behaviors P(A,B|x,y), no-signaling checks and local polytope membership.
//!
//! Indices: Alice's setting `x` is 0 for `a` and 1 for `a'`, Bob's `y` is 0
//! for `b` and 1 for `b'`. Outcome index 0 is +1 and index 1 is -1.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{invalid, Error, Result};
use crate::lhv::{enumerate_deterministic, DeterministicStrategy};
use crate::simplex;

pub const ALICE_SETTINGS: [&str; 2] = ["a", "a'"];
pub const BOB_SETTINGS: [&str; 2] = ["b", "b'"];
/// Block labels in (x, y) row-major order.
pub const BLOCK_LABELS: [&str; 4] = ["a,b", "a,b'", "a',b", "a',b'"];
pub const OUTCOME_VALUES: [f64; 2] = [1.0, -1.0];

/// Entries at or above this (negative) value are clamped to 0.
pub const NEGATIVE_CLAMP: f64 = -1e-12;
/// Per-block normalization tolerance.
pub const BLOCK_SUM_TOL: f64 = 1e-9;
/// Marginal deviation accepted by [`no_signaling`].
pub const NO_SIGNALING_TOL: f64 = 1e-9;
/// Slack on the CHSH variants in [`is_local`].
pub const LOCAL_BOUND_TOL: f64 = 1e-9;
/// Phase-1 infeasibility accepted as feasible in [`local_decomposition`].
pub const FEASIBILITY_TOL: f64 = 1e-9;

pub type Table = [[[[f64; 2]; 2]; 2]; 2];

pub fn block_label(x: usize, y: usize) -> &'static str {
    BLOCK_LABELS[2 * x + y]
}

/// A conditional probability table P(A,B|x,y) for two settings and two
/// outcomes per party.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Behavior {
    p: Table,
}

impl Behavior {
    /// Validates the table: entries must be finite and at least
    /// [`NEGATIVE_CLAMP`] (small negatives are clamped to zero), and every
    /// (x, y) block must sum to 1 within [`BLOCK_SUM_TOL`].
    pub fn new(mut p: Table) -> Result<Self> {
        for x in 0..2 {
            for y in 0..2 {
                let mut sum = 0.0;
                for a in 0..2 {
                    for b in 0..2 {
                        let v = &mut p[x][y][a][b];
                        if !v.is_finite() {
                            return Err(invalid(format!("block ({}) has a non-finite entry", block_label(x, y))));
                        }
                        if *v < NEGATIVE_CLAMP {
                            return Err(invalid(format!(
                                "block ({}) has negative probability {}",
                                block_label(x, y),
                                *v
                            )));
                        }
                        if *v < 0.0 {
                            *v = 0.0;
                        }
                        sum += *v;
                    }
                }
                if (sum - 1.0).abs() > BLOCK_SUM_TOL {
                    return Err(invalid(format!("block ({}) sums to {sum}, expected 1", block_label(x, y))));
                }
            }
        }
        Ok(Self { p })
    }

    pub(crate) fn from_table_unchecked(p: Table) -> Self {
        Self { p }
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize, usize, usize) -> f64) -> Result<Self> {
        let mut p = [[[[0.0; 2]; 2]; 2]; 2];
        for (x, px) in p.iter_mut().enumerate() {
            for (y, pxy) in px.iter_mut().enumerate() {
                for (a, pa) in pxy.iter_mut().enumerate() {
                    for (b, v) in pa.iter_mut().enumerate() {
                        *v = f(x, y, a, b);
                    }
                }
            }
        }
        Self::new(p)
    }

    /// Builds the no-signaling behavior with the given one-party biases and
    /// correlators: P(A,B|x,y) = (1 + A·mA(x) + B·mB(y) + AB·E(x,y)) / 4.
    pub fn from_marginals_and_correlators(alice_bias: [f64; 2], bob_bias: [f64; 2], e: [f64; 4]) -> Result<Self> {
        Self::from_fn(|x, y, a, b| {
            let (va, vb) = (OUTCOME_VALUES[a], OUTCOME_VALUES[b]);
            (1.0 + va * alice_bias[x] + vb * bob_bias[y] + va * vb * e[2 * x + y]) / 4.0
        })
    }

    pub fn uniform() -> Self {
        Self { p: [[[[0.25; 2]; 2]; 2]; 2] }
    }

    /// The Popescu-Rohrlich box with correlators (1, 1, 1, -1).
    pub fn pr_box() -> Self {
        Self::from_marginals_and_correlators([0.0; 2], [0.0; 2], [1.0, 1.0, 1.0, -1.0])
            .expect("PR box is a valid behavior")
    }

    /// The vertex of the local polytope for a deterministic strategy.
    pub fn deterministic(s: DeterministicStrategy) -> Self {
        let alice = s.alice_indices();
        let bob = s.bob_indices();
        let mut p = [[[[0.0; 2]; 2]; 2]; 2];
        for x in 0..2 {
            for y in 0..2 {
                p[x][y][alice[x]][bob[y]] = 1.0;
            }
        }
        Self { p }
    }

    pub fn get(&self, x: usize, y: usize, a: usize, b: usize) -> f64 {
        self.p[x][y][a][b]
    }

    pub fn block(&self, x: usize, y: usize) -> [[f64; 2]; 2] {
        self.p[x][y]
    }

    pub fn table(&self) -> &Table {
        &self.p
    }

    /// P(A = outcome | x) computed inside block (x, y).
    pub fn alice_marginal(&self, x: usize, y: usize, a: usize) -> f64 {
        self.p[x][y][a][0] + self.p[x][y][a][1]
    }

    /// P(B = outcome | y) computed inside block (x, y).
    pub fn bob_marginal(&self, x: usize, y: usize, b: usize) -> f64 {
        self.p[x][y][0][b] + self.p[x][y][1][b]
    }

    /// Pointwise convex combination `(1 - w)·self + w·other`.
    pub fn mix(&self, other: &Self, w: f64) -> Self {
        let mut p = self.p;
        for x in 0..2 {
            for y in 0..2 {
                for a in 0..2 {
                    for b in 0..2 {
                        p[x][y][a][b] = (1.0 - w) * self.p[x][y][a][b] + w * other.p[x][y][a][b];
                    }
                }
            }
        }
        Self { p }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.entries().zip(other.entries()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    pub fn entries(&self) -> impl Iterator<Item = f64> + '_ {
        self.p.iter().flatten().flatten().flatten().copied()
    }

    /// Applies a relabeling: swap Alice's settings, swap Bob's settings, flip
    /// outcomes per setting (`flip_alice[x]`, `flip_bob[y]`).
    pub fn relabeled(&self, swap_alice: bool, swap_bob: bool, flip_alice: [bool; 2], flip_bob: [bool; 2]) -> Self {
        let mut p = [[[[0.0; 2]; 2]; 2]; 2];
        for x in 0..2 {
            for y in 0..2 {
                for a in 0..2 {
                    for b in 0..2 {
                        let sx = if swap_alice { 1 - x } else { x };
                        let sy = if swap_bob { 1 - y } else { y };
                        let sa = if flip_alice[sx] { 1 - a } else { a };
                        let sb = if flip_bob[sy] { 1 - b } else { b };
                        p[sx][sy][sa][sb] = self.p[x][y][a][b];
                    }
                }
            }
        }
        Self { p }
    }
}

/// Correlators in the order E(a,b), E(a,b′), E(a′,b), E(a′,b′).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Correlators(pub [f64; 4]);

impl Correlators {
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.0[2 * x + y]
    }

    /// E(a,b) + E(a,b′) + E(a′,b) − E(a′,b′) without range checks.
    pub fn chsh_value(&self) -> f64 {
        let [ab, abp, apb, apbp] = self.0;
        ab + abp + apb - apbp
    }

    /// The four CHSH variants with the minus sign moved through each
    /// position. Together with overall negation these form the eight facets.
    pub fn chsh_variants(&self) -> [f64; 4] {
        let e = self.0;
        let total: f64 = e.iter().sum();
        [total - 2.0 * e[0], total - 2.0 * e[1], total - 2.0 * e[2], total - 2.0 * e[3]]
    }
}

/// E(x,y) = Σ A·B·P(A,B|x,y).
pub fn correlators(b: &Behavior) -> Correlators {
    let mut e = [0.0; 4];
    for x in 0..2 {
        for y in 0..2 {
            let mut acc = 0.0;
            for a in 0..2 {
                for bb in 0..2 {
                    acc += OUTCOME_VALUES[a] * OUTCOME_VALUES[bb] * b.p[x][y][a][bb];
                }
            }
            e[2 * x + y] = acc.clamp(-1.0, 1.0);
        }
    }
    Correlators(e)
}

/// Per-constraint residuals of the no-signaling conditions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoSignalingReport {
    /// max over A of |P(A|x, b) − P(A|x, b′)|, one entry per Alice setting.
    pub alice: [f64; 2],
    /// max over B of |P(B|a, y) − P(B|a′, y)|, one entry per Bob setting.
    pub bob: [f64; 2],
}

impl NoSignalingReport {
    pub fn max_residual(&self) -> f64 {
        self.alice.iter().chain(self.bob.iter()).copied().fold(0.0, f64::max)
    }

    pub fn holds(&self) -> bool {
        self.max_residual() <= NO_SIGNALING_TOL
    }
}

pub fn no_signaling_report(b: &Behavior) -> NoSignalingReport {
    let mut alice = [0.0f64; 2];
    let mut bob = [0.0f64; 2];
    for x in 0..2 {
        for a in 0..2 {
            let d = (b.alice_marginal(x, 0, a) - b.alice_marginal(x, 1, a)).abs();
            alice[x] = alice[x].max(d);
        }
    }
    for y in 0..2 {
        for bb in 0..2 {
            let d = (b.bob_marginal(0, y, bb) - b.bob_marginal(1, y, bb)).abs();
            bob[y] = bob[y].max(d);
        }
    }
    NoSignalingReport { alice, bob }
}

/// Whether each party's marginals are independent of the other's setting.
pub fn no_signaling(b: &Behavior) -> bool {
    no_signaling_report(b).holds()
}

pub(crate) fn require_no_signaling(b: &Behavior) -> Result<NoSignalingReport> {
    let report = no_signaling_report(b);
    if report.holds() {
        Ok(report)
    } else {
        Err(Error::Signaling { residual: report.max_residual() })
    }
}

/// Local polytope membership through the eight CHSH facets. Signaling
/// inputs are rejected, since the facet description assumes no-signaling.
pub fn is_local(b: &Behavior) -> Result<bool> {
    require_no_signaling(b)?;
    let variants = correlators(b).chsh_variants();
    Ok(variants.iter().all(|s| s.abs() <= 2.0 + LOCAL_BOUND_TOL))
}

/// Convex weights over the 16 deterministic strategies, in
/// [`enumerate_deterministic`] order.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalDecomposition {
    pub weights: [f64; 16],
}

impl LocalDecomposition {
    pub fn strategies(&self) -> impl Iterator<Item = (DeterministicStrategy, f64)> + '_ {
        enumerate_deterministic().into_iter().map(|(s, _)| s).zip(self.weights.iter().copied())
    }

    /// Σ w_s · D_s.
    pub fn behavior(&self) -> Behavior {
        let mut p = [[[[0.0; 2]; 2]; 2]; 2];
        for (s, w) in self.strategies() {
            let d = Behavior::deterministic(s);
            for x in 0..2 {
                for y in 0..2 {
                    for a in 0..2 {
                        for bb in 0..2 {
                            p[x][y][a][bb] += w * d.p[x][y][a][bb];
                        }
                    }
                }
            }
        }
        Behavior { p }
    }
}

/// Searches for a convex decomposition into deterministic behaviors by a
/// phase-1 simplex. Returns `None` when the behavior lies outside the local
/// polytope (signaling behaviors always do).
pub fn local_decomposition(b: &Behavior) -> Option<LocalDecomposition> {
    let vertices: Vec<Behavior> =
        enumerate_deterministic().into_iter().map(|(s, _)| Behavior::deterministic(s)).collect();
    let mut rows = Vec::with_capacity(16);
    let mut rhs = Vec::with_capacity(16);
    for x in 0..2 {
        for y in 0..2 {
            for a in 0..2 {
                for bb in 0..2 {
                    rows.push(vertices.iter().map(|v| v.p[x][y][a][bb]).collect::<Vec<_>>());
                    rhs.push(b.p[x][y][a][bb]);
                }
            }
        }
    }
    let solution = simplex::phase_one(&rows, &rhs, FEASIBILITY_TOL)?;
    let mut weights = [0.0; 16];
    for (w, s) in weights.iter_mut().zip(solution) {
        *w = s.max(0.0);
    }
    Some(LocalDecomposition { weights })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lhv::{lhv_behavior, strategy_to_model, Outcome};
    use crate::optimizer::reference_settings;
    use crate::quantum::{quantum_behavior, singlet};

    const EPS: f64 = 1e-12;

    fn singlet_behavior() -> Behavior {
        quantum_behavior(&singlet(), &reference_settings().vectors())
    }

    #[test]
    fn validation_rejects_bad_blocks() {
        let mut p = *Behavior::uniform().table();
        p[1][0][0][0] = 0.5;
        assert!(matches!(Behavior::new(p), Err(Error::InvalidInput(_))));
        let mut p = *Behavior::uniform().table();
        p[0][0][0][0] = -0.1;
        p[0][0][0][1] = 0.6;
        assert!(Behavior::new(p).is_err());
    }

    #[test]
    fn tiny_negatives_are_clamped() {
        let mut p = *Behavior::uniform().table();
        p[0][0][0][0] = -1e-13;
        p[0][0][0][1] = 0.5;
        let b = Behavior::new(p).unwrap();
        assert_eq!(b.get(0, 0, 0, 0), 0.0);
    }

    #[test]
    fn correlator_examples() {
        assert_eq!(correlators(&Behavior::uniform()).0, [0.0; 4]);
        let h = core::f64::consts::FRAC_1_SQRT_2;
        let e = correlators(&singlet_behavior()).0;
        for (got, want) in e.iter().zip([-h, -h, -h, h]) {
            assert!((got - want).abs() < EPS);
        }
        let plus = DeterministicStrategy::new([Outcome::Plus; 4]);
        assert_eq!(correlators(&Behavior::deterministic(plus)).0, [1.0; 4]);
    }

    #[test]
    fn no_signaling_examples() {
        let model = crate::lhv::LhvModel::single([0.2, 0.9], [0.6, 0.1]);
        assert!(no_signaling(&lhv_behavior(&model)));
        assert!(no_signaling(&singlet_behavior()));

        // Alice's outcome at a is fixed by Bob's setting.
        let mut p = [[[[0.25; 2]; 2]; 2]; 2];
        p[0][0] = [[0.5, 0.5], [0.0, 0.0]];
        p[0][1] = [[0.0, 0.0], [0.5, 0.5]];
        let b = Behavior::new(p).unwrap();
        let report = no_signaling_report(&b);
        assert!(!report.holds());
        assert!((report.alice[0] - 1.0).abs() < EPS);
        assert_eq!(report.alice[1], 0.0);
        assert!(matches!(is_local(&b), Err(Error::Signaling { .. })));
        assert!(local_decomposition(&b).is_none());
    }

    #[test]
    fn is_local_examples() {
        assert!(is_local(&Behavior::uniform()).unwrap());
        assert!(!is_local(&singlet_behavior()).unwrap());
        assert!(!is_local(&Behavior::pr_box()).unwrap());
        assert_eq!(correlators(&Behavior::pr_box()).chsh_value(), 4.0);
    }

    #[test]
    fn decomposition_examples() {
        let d = local_decomposition(&Behavior::uniform()).expect("uniform is local");
        assert!(d.behavior().max_abs_diff(&Behavior::uniform()) < 1e-7);
        let sum: f64 = d.weights.iter().sum();
        assert!((sum - 1.0).abs() < 1e-9);

        let plus = DeterministicStrategy::new([Outcome::Plus; 4]);
        let d = local_decomposition(&Behavior::deterministic(plus)).unwrap();
        assert!((d.weights[0] - 1.0).abs() < 1e-9);
        assert!(d.weights[1..].iter().all(|w| w.abs() < 1e-9));

        assert!(local_decomposition(&singlet_behavior()).is_none());
        assert!(local_decomposition(&Behavior::pr_box()).is_none());
    }

    #[test]
    fn decomposition_reproduces_through_models() {
        let model = crate::lhv::LhvModel::single([0.2, 0.9], [0.6, 0.1]);
        let b = lhv_behavior(&model);
        let d = local_decomposition(&b).unwrap();
        let mut p = [[[[0.0; 2]; 2]; 2]; 2];
        for (s, w) in d.strategies() {
            let vb = lhv_behavior(&strategy_to_model(s));
            for x in 0..2 {
                for y in 0..2 {
                    for a in 0..2 {
                        for bb in 0..2 {
                            p[x][y][a][bb] += w * vb.get(x, y, a, bb);
                        }
                    }
                }
            }
        }
        assert!(Behavior::from_table_unchecked(p).max_abs_diff(&b) < 1e-7);
    }

    #[test]
    fn variants_match_relabelings() {
        let e = Correlators([0.1, -0.2, 0.3, 0.4]);
        let v = e.chsh_variants();
        assert!((v[3] - e.chsh_value()).abs() < EPS);
        assert!((v[0] - (-0.1 - 0.2 + 0.3 + 0.4)).abs() < EPS);
    }
}
