//! Bell-scenario machinery: local hidden variable models and the CHSH bound,
//! two-qubit quantum correlations up to Tsirelson's bound, local polytope
//! membership, the causal network of a Bell test, and an executable encoding
//! of the seven theses whose joint rejection-structure classifies
//! interpretations of quantum mechanics.
//!
//! The crate is `no_std` and needs only `alloc`. File formats, CSV export
//! and the command-line front end live in `bell-cli`.

#![no_std]
#![allow(clippy::needless_range_loop)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod behavior;
pub mod error;
pub mod heptalemma;
pub mod lhv;
pub mod network;
pub mod optimizer;
pub mod quantum;
pub mod random;
mod simplex;

pub use behavior::{
    correlators, is_local, local_decomposition, no_signaling, no_signaling_report, Behavior, Correlators,
    LocalDecomposition, NoSignalingReport,
};
pub use error::{Error, Result};
pub use heptalemma::{
    classical, escape_route, nonlocal_witness, qm_compatible, superdeterministic_witness, taxonomy, EscapeRoute,
    InterpretationRecord, Stance, Thesis,
};
pub use lhv::{
    chsh, enumerate_deterministic, lhv_behavior, model_chsh, strategy_to_model, DeterministicStrategy, HiddenState,
    LhvModel, Outcome,
};
pub use network::{
    estimate_chsh, exact_joint, sample, verify_markov, verify_markov_joint, ChshEstimate, JointTable, MarkovReport,
    NetworkSpec, SampleDataset, SampleRecord,
};
pub use optimizer::{
    chsh_of_settings, reference_settings, seesaw_maximize, sweep, MeasurementSettings, OptimizationResult, SweepRow,
    SweepSpec,
};
pub use quantum::{
    correlation, correlation_matrix, pauli_dot, quantum_behavior, singlet, tensor, Observable2, TwoQubitState,
    UnitVector3,
};

/// 2√2, the largest |S| reachable with two qubits.
pub const TSIRELSON_BOUND: f64 = 2.0 * core::f64::consts::SQRT_2;
/// Largest |S| of any local hidden variable model.
pub const LOCAL_BOUND: f64 = 2.0;
