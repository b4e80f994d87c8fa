//! Qubit-cavity interaction toolkit.
//!
//! Models a two-level system coupled to the modes of a one-dimensional
//! Dirichlet cavity held in a thermal state, in two regimes:
//!
//! * [`dissipative`] — energy-exchanging (σx) coupling treated at second
//!   order: population shift, coherence loss, environment heat;
//! * [`dephasing`] — σz coupling solved exactly: suppression factor,
//!   displaced thermal branches, recurrences.
//!
//! [`entropy`] provides the von Neumann entropy bookkeeping and the
//! heat-entropy bound check; [`oracle`] evolves the joint qubit ⊗
//! truncated-Fock state exactly and validates every closed form above;
//! [`scenario`] drives parameter sweeps and writes the data files;
//! [`sweeps`] holds the randomized property sweeps shared by the test
//! suite and the `verify` CLI command.

pub mod cavity;
pub mod dephasing;
pub mod dissipative;
pub mod entropy;
pub mod error;
pub mod oracle;
pub mod qubit;
pub mod scenario;
pub mod sweeps;
pub mod thermal;
pub mod util;

pub use cavity::{Boundary, CavitySpec, ModeOverlap, OverlapSign};
pub use dephasing::{dephased_state, DephasingModel, DephasingOutcome};
pub use dissipative::{
    coherence_loss, environment_diagonal_update, evolved_state, heat, outcome, population_shift,
    DissipativeParams, PerturbativeOutcome,
};
pub use entropy::{
    eigenvalues_exact, eigenvalues_first_order, landauer_check, mixed_process_entropy_change,
    von_neumann_entropy, LandauerReport,
};
pub use error::{Error, Result};
pub use qubit::QubitDensityMatrix;
pub use thermal::{
    mean_occupation, occupation_moments, thermal_weight, truncation_cutoff, ThermalEnvironment,
};

/// Library version recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
