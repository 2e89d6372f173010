//! The seven theses, stances over them, the interpretation taxonomy and
//! constructive models for the two probabilistic escape routes.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::behavior::{require_no_signaling, Behavior, ALICE_SETTINGS, BOB_SETTINGS};
use crate::error::{invalid, Result};
use crate::network::JointTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Thesis {
    MeasurementRealism,
    NonRelationalism,
    NonFragmentation,
    OneWorld,
    Locality,
    MeasurementIndependence,
    NonSolipsism,
}

impl Thesis {
    /// In taxonomy column order.
    pub const ALL: [Thesis; 7] = [
        Thesis::MeasurementRealism,
        Thesis::NonRelationalism,
        Thesis::NonFragmentation,
        Thesis::OneWorld,
        Thesis::Locality,
        Thesis::MeasurementIndependence,
        Thesis::NonSolipsism,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Thesis::MeasurementRealism => "Measurement realism",
            Thesis::NonRelationalism => "Non-relationalism",
            Thesis::NonFragmentation => "Non-fragmentation",
            Thesis::OneWorld => "One world",
            Thesis::Locality => "Locality",
            Thesis::MeasurementIndependence => "Measurement independence",
            Thesis::NonSolipsism => "Non-solipsism",
        }
    }

    /// Identifier used in machine-readable output, e.g. `MeasurementRealism`.
    pub fn key(self) -> &'static str {
        match self {
            Thesis::MeasurementRealism => "MeasurementRealism",
            Thesis::NonRelationalism => "NonRelationalism",
            Thesis::NonFragmentation => "NonFragmentation",
            Thesis::OneWorld => "OneWorld",
            Thesis::Locality => "Locality",
            Thesis::MeasurementIndependence => "MeasurementIndependence",
            Thesis::NonSolipsism => "NonSolipsism",
        }
    }

    pub fn from_key(key: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|t| t.key().eq_ignore_ascii_case(key) || t.name().eq_ignore_ascii_case(key))
    }

    fn bit(self) -> u8 {
        1 << (self as u8)
    }
}

impl fmt::Display for Thesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The set of theses a position retains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Stance(u8);

impl Stance {
    pub const COUNT: usize = 128;

    pub fn empty() -> Self {
        Self(0)
    }

    pub fn full() -> Self {
        Self(0x7f)
    }

    /// Every thesis except `t`.
    pub fn without(t: Thesis) -> Self {
        Self(Self::full().0 & !t.bit())
    }

    pub fn from_theses(theses: impl IntoIterator<Item = Thesis>) -> Self {
        Self(theses.into_iter().fold(0, |acc, t| acc | t.bit()))
    }

    /// All 128 subsets, by bit pattern.
    pub fn all() -> impl Iterator<Item = Stance> {
        (0..Self::COUNT as u8).map(Stance)
    }

    pub fn contains(self, t: Thesis) -> bool {
        self.0 & t.bit() != 0
    }

    pub fn retain(self, t: Thesis) -> Self {
        Self(self.0 | t.bit())
    }

    pub fn drop(self, t: Thesis) -> Self {
        Self(self.0 & !t.bit())
    }

    pub fn is_subset_of(self, other: Stance) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn retained(self) -> impl Iterator<Item = Thesis> {
        Thesis::ALL.into_iter().filter(move |t| self.contains(*t))
    }

    pub fn rejected(self) -> impl Iterator<Item = Thesis> {
        Thesis::ALL.into_iter().filter(move |t| !self.contains(*t))
    }
}

/// Whether the retained theses can coexist with quantum predictions: only
/// the full set of seven is inconsistent, every proper subset is fine.
pub fn qm_compatible(s: Stance) -> bool {
    s != Stance::full()
}

/// A domain counts as classical exactly when it is consistent with all
/// seven theses.
pub fn classical(flags: Stance) -> bool {
    flags == Stance::full()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InterpretationRecord {
    pub name: &'static str,
    pub rejected: Thesis,
}

impl InterpretationRecord {
    pub fn stance(&self) -> Stance {
        Stance::without(self.rejected)
    }
}

const fn row(name: &'static str, rejected: Thesis) -> InterpretationRecord {
    InterpretationRecord { name, rejected }
}

const TAXONOMY: [InterpretationRecord; 19] = [
    row("de Broglie-Bohm", Thesis::Locality),
    row("Collapse models", Thesis::Locality),
    row("Wavefunction realism", Thesis::Locality),
    row("Transactional", Thesis::Locality),
    row("Indivisible stochastic", Thesis::Locality),
    row("Superdeterminism", Thesis::MeasurementIndependence),
    row("Cellular automaton", Thesis::MeasurementIndependence),
    row("Copenhagen", Thesis::MeasurementRealism),
    row("Everett", Thesis::MeasurementRealism),
    row("Quantum Darwinism", Thesis::MeasurementRealism),
    row("Relational", Thesis::NonRelationalism),
    row("Pragmatic", Thesis::NonRelationalism),
    row("Brukner", Thesis::NonRelationalism),
    row("Quantum logic", Thesis::NonFragmentation),
    row("Bub-Pitowsky", Thesis::NonFragmentation),
    row("Sheaf contextual", Thesis::NonFragmentation),
    row("Fragmentalist QBism", Thesis::NonFragmentation),
    row("Pluriverse QBism", Thesis::OneWorld),
    row("Radical single user", Thesis::NonSolipsism),
];

/// Interpretations and the single thesis each rejects, in table order.
pub fn taxonomy() -> &'static [InterpretationRecord] {
    &TAXONOMY
}

/// Case-insensitive exact-name lookup.
pub fn lookup(name: &str) -> Option<&'static InterpretationRecord> {
    let name = name.trim();
    TAXONOMY.iter().find(|r| r.name.eq_ignore_ascii_case(name))
}

/// Names containing `query` (case-insensitive), for unknown-name hints.
pub fn suggest(query: &str) -> Vec<&'static str> {
    let q = query.trim().to_ascii_lowercase();
    if q.is_empty() {
        return Vec::new();
    }
    TAXONOMY
        .iter()
        .filter(|r| {
            let n = r.name.to_ascii_lowercase();
            n.contains(&q) || q.contains(&n)
        })
        .map(|r| r.name)
        .collect()
}

/// How an interpretation that drops one thesis escapes the inconsistency.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EscapeRoute {
    /// Outcome-dependent remote response; see [`nonlocal_witness`].
    Nonlocal,
    /// Hidden variable correlated with the settings; see
    /// [`superdeterministic_witness`].
    Superdeterministic,
    /// No probabilistic model exists for this route; the rejection concerns
    /// the nature of facts or observers rather than a distribution.
    NonConstructive(Thesis),
}

pub fn escape_route(dropped: Thesis) -> EscapeRoute {
    match dropped {
        Thesis::Locality => EscapeRoute::Nonlocal,
        Thesis::MeasurementIndependence => EscapeRoute::Superdeterministic,
        other => EscapeRoute::NonConstructive(other),
    }
}

/// A measurement-independent model with no hidden variable in which Bob's
/// response depends on Alice's setting and outcome: P(A|x)·P(B|y,x,A).
#[derive(Debug, Clone, PartialEq)]
pub struct NonlocalWitness {
    /// P(A|x), indexed `[x][A]`.
    pub alice: [[f64; 2]; 2],
    /// P(B|y,x,A), indexed `[x][y][A][B]`.
    pub bob: [[[[f64; 2]; 2]; 2]; 2],
}

impl NonlocalWitness {
    /// P(A,B|x,y) = P(A|x)·P(B|y,x,A).
    pub fn recompose(&self) -> Result<Behavior> {
        Behavior::from_fn(|x, y, a, b| self.alice[x][a] * self.bob[x][y][a][b])
    }

    /// Largest change in Bob's response when only Alice's setting changes,
    /// over outcome contexts with positive probability. Zero means Bob's
    /// table never reads `x`.
    pub fn remote_setting_dependence(&self) -> f64 {
        let mut worst = 0.0f64;
        for y in 0..2 {
            for a in 0..2 {
                if self.alice[0][a] <= 0.0 || self.alice[1][a] <= 0.0 {
                    continue;
                }
                for b in 0..2 {
                    worst = worst.max((self.bob[0][y][a][b] - self.bob[1][y][a][b]).abs());
                }
            }
        }
        worst
    }
}

/// Builds the locality-violating model that reproduces a no-signaling
/// behavior exactly.
pub fn nonlocal_witness(b: &Behavior) -> Result<NonlocalWitness> {
    require_no_signaling(b)?;
    let mut alice = [[0.0; 2]; 2];
    let mut bob = [[[[0.0; 2]; 2]; 2]; 2];
    for x in 0..2 {
        for a in 0..2 {
            alice[x][a] = b.alice_marginal(x, 0, a);
        }
        for y in 0..2 {
            for a in 0..2 {
                let pa = b.alice_marginal(x, y, a);
                for bb in 0..2 {
                    bob[x][y][a][bb] = if pa > 0.0 {
                        b.get(x, y, a, bb) / pa
                    } else {
                        // Unreachable context; any distribution recomposes to zero.
                        b.bob_marginal(x, y, bb)
                    };
                }
            }
        }
    }
    Ok(NonlocalWitness { alice, bob })
}

/// A local model in which λ fixes the settings as well as the outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperdeterministicWitness {
    /// Joint over λ = (x, y, A, B) tuples and the variables they determine.
    pub joint: JointTable,
}

impl SuperdeterministicWitness {
    /// P(A,B|x,y) from the induced joint.
    pub fn recompose(&self) -> Result<Behavior> {
        self.joint.conditional_behavior()
    }

    /// Largest |P(λ|x,y) − P(λ)|; positive whenever the behavior is not a
    /// product of its settings' outcome tables.
    pub fn setting_dependence(&self) -> f64 {
        crate::network::verify_markov_joint(&self.joint).roots_independent
    }
}

fn lambda_label(x: usize, y: usize, a: usize, b: usize) -> String {
    let sign = |i: usize| if i == 0 { '+' } else { '-' };
    format!("{},{},{},{}", ALICE_SETTINGS[x], BOB_SETTINGS[y], sign(a), sign(b))
}

/// λ ranges over all (x, y, A, B) with P(λ) = P(x)·P(y)·P(A,B|x,y). The
/// settings and outcomes are read off λ, so each outcome depends only on
/// λ while λ is correlated with the settings.
pub fn superdeterministic_witness(
    b: &Behavior,
    setting_prior_a: [f64; 2],
    setting_prior_b: [f64; 2],
) -> Result<SuperdeterministicWitness> {
    for (name, prior) in [("settingPriorA", setting_prior_a), ("settingPriorB", setting_prior_b)] {
        if prior.iter().any(|p| !p.is_finite() || *p <= 0.0) {
            return Err(invalid(format!("{name} must be strictly positive, got {prior:?}")));
        }
        if (prior[0] + prior[1] - 1.0).abs() > crate::network::DISTRIBUTION_TOL {
            return Err(invalid(format!("{name} must sum to 1, got {prior:?}")));
        }
    }
    let mut labels = Vec::with_capacity(16);
    let mut p = alloc::vec![0.0; 16 * 16];
    for x in 0..2 {
        for y in 0..2 {
            for a in 0..2 {
                for bb in 0..2 {
                    let l = labels.len();
                    labels.push(lambda_label(x, y, a, bb));
                    p[l * 16 + x * 8 + y * 4 + a * 2 + bb] =
                        setting_prior_a[x] * setting_prior_b[y] * b.get(x, y, a, bb);
                }
            }
        }
    }
    Ok(SuperdeterministicWitness { joint: JointTable::from_raw(labels, p)? })
}
