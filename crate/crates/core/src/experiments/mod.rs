//! Monte Carlo harness: logical error rates, threshold crossings and
//! sub-threshold exponents.

pub mod exponent;
mod memory;
pub mod output;
pub mod stats;
pub mod sweeps;
pub mod threshold;

pub use exponent::{fit_exponent, ExponentFit, ExponentRequest};
pub use memory::{estimate_logical_rate, LogicalRateEstimate, MemoryExperiment, TrialPolicy};
pub use sweeps::{erasure_sweep, run_biased_comparison, run_spam_sweep, threshold_auto, SweepSettings};
pub use threshold::{estimate_threshold, SpamPolicy, ThresholdEstimate, ThresholdRequest};
