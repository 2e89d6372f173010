use alloc::string::String;

/// Errors reported by `bell-core` operations.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument violated a documented precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A computation produced a value that contradicts its own invariants,
    /// e.g. a Hermitian expectation with a non-negligible imaginary part.
    #[error("internal consistency violated: {0}")]
    Inconsistent(String),

    /// The behavior fails no-signaling, so locality questions are not answered.
    #[error("behavior is signaling (max marginal deviation {residual:.3e})")]
    Signaling { residual: f64 },

    /// A sample dataset lacks enough records in some (x, y) block.
    #[error("insufficient data: block ({block}) has {count} record(s), need at least 2")]
    InsufficientData { block: &'static str, count: usize },
}

pub type Result<T, E = Error> = core::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
