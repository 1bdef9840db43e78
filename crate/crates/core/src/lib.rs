//! Information content of states in operational probabilistic theories.
//!
//! States, effects and channels of classical, quantum and box-world (squit)
//! systems share one real-vector representation. On top of it the crate
//! provides the operational norm and measurement fidelity, entropy-like
//! functionals, compression schemes with their figures of merit, and rate
//! searches.

use serde::{Deserialize, Serialize};

pub mod compression;
pub mod entropy;
pub mod error;
pub mod metrics;
pub mod opt;
pub mod optim;
pub mod system;
pub mod theories;
pub mod verify;

pub use nalgebra;
pub use num_complex;

pub use error::{Error, Result};
pub use opt::{
    compose_par, compose_seq, marginalize, pair, ChannelMat, DilationState, EffectVec, Ensemble,
    ObservationTest, StateVec, TAU_SUM,
};
pub use optim::SearchConfig;
pub use system::{SystemLabel, TheoryId};
pub use theories::TheoryModel;

/// How a reported number relates to the quantity it estimates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundDirection {
    Exact,
    /// The true value is at most the reported one.
    Upper,
    /// The true value is at least the reported one.
    Lower,
}

impl BoundDirection {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundDirection::Exact => "exact",
            BoundDirection::Upper => "upper",
            BoundDirection::Lower => "lower",
        }
    }
}

impl std::fmt::Display for BoundDirection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}
