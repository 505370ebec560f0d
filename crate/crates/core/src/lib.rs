//! Activated random walk in the Diaconis–Fulton representation.
//!
//! The crate stabilizes finite domains from counter-based instruction
//! arrays, detects essential pairs of increasing events, enumerates bounded
//! events exactly and estimates activity across the `(λ, μ)` phase diagram.
//! Each capability has a runnable program under `examples/`.

pub mod analysis;
pub mod cli;
pub mod engine;
pub mod error;
pub mod essential;
pub mod randomness;
pub mod state;
pub mod topology;

pub use analysis::{ExactEnumerator, PhasePoint, SemiLine};
pub use engine::{CapStyle, Domain, Policy, StabilizationResult, StabilizeOptions, Stabilizer};
pub use error::{ArwError, Result};
pub use essential::{Decision, EventSpec};
pub use randomness::{ParticleLaw, RandomSource};
pub use state::{InstructionSource, ParticleConfig, SiteState};
pub use topology::{Topology, VertexId};
