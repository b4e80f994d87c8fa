use thiserror::Error;

/// Errors produced by the model and the reference evolver.
#[derive(Debug, Error)]
pub enum Error {
    /// A scalar argument is outside the domain of the operation.
    #[error("invalid {name} = {value}: {reason}")]
    Domain {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// A matrix fails the density-matrix contract (Hermiticity, unit trace,
    /// positivity) beyond tolerance.
    #[error("not a valid density matrix: {0}")]
    InvalidState(String),

    /// Second-order results stopped being a valid state; the coupling or the
    /// duration is too large for the expansion.
    #[error("perturbative expansion broke down: {0}")]
    PerturbationBreakdown(String),

    /// The truncated Fock space is too small for the requested evolution.
    #[error("Fock-space truncation too small: {0}")]
    Truncation(String),

    /// The joint Hilbert space exceeds the configured dense-matrix cap.
    #[error("joint dimension {dim} exceeds cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    /// Scenario configuration is invalid.
    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("config parse error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::Domain {
            name,
            value,
            reason,
        }
    }
}
