//! Error model of an erasure-converting Rydberg CZ gate: analytic decay
//! channels, a master-equation oracle, and the atomic-physics budgets
//! around them.

pub mod branching;
pub mod channels;
pub mod coefficients;
pub mod config;
pub mod constants;
pub mod cycle;
pub mod detection;
pub mod error;
pub mod lindblad;

pub use branching::{branching_ratios, six_j, BranchingInput};
pub use channels::{channel_probabilities, no_jump_infidelity, ChannelProbabilities, InitialDistribution};
pub use coefficients::{trajectory_coefficients, Trajectory, TrajectoryCoefficients};
pub use config::{BranchingFractions, GatePhysicsConfig};
pub use cycle::{cycle_time, CycleTimeConfig};
pub use detection::{ion_spread, neutral_atom_spread, DetectionBudgetConfig, IonSpread};
pub use error::{Error, Result};

#[cfg(feature = "parallel")]
pub(crate) fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    items.iter().map(f).collect()
}
