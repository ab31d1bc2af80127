//! Command-line flags. Every field is optional so that a flag left unset
//! falls through to the config file and then to the built-in default.

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::path::PathBuf;
use std::str::FromStr;

#[derive(Debug, Parser)]
#[command(name = "erasure-sim", version, about = "Erasure-conversion surface code and Rydberg gate simulations")]
pub struct Cli {
    /// Declarative TOML config; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(flatten)]
    pub global: GlobalArgs,

    /// Increase log verbosity (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GlobalArgs {
    /// Master seed for every random stream.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Logical error rate of one memory experiment.
    Memory(MemoryArgs),
    /// Threshold crossings across erasure fractions.
    Threshold(ThresholdArgs),
    /// Sub-threshold exponent fits.
    Exponent(ExponentArgs),
    /// Thresholds under biased Pauli noise.
    Biased(BiasedArgs),
    /// Thresholds across ancilla SPAM rates.
    Spam(SpamArgs),
    /// Analytic gate error channels and erasure fraction.
    Gate(GateArgs),
    /// Master-equation gate simulation.
    Lindblad(LindbladArgs),
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MemoryArgs {
    #[arg(short, long)]
    pub distance: Option<usize>,
    /// Two-qubit gate error probability.
    #[arg(long)]
    pub p: Option<f64>,
    /// Erasure fraction R_e.
    #[arg(long)]
    pub re: Option<f64>,
    /// Ancilla preparation and measurement flip probability.
    #[arg(long)]
    pub pm: Option<f64>,
    /// Switch to biased Pauli noise with this bias (`inf` allowed).
    #[arg(long)]
    pub eta: Option<f64>,
    #[arg(long)]
    pub trials: Option<u64>,
    /// Stop early after this many failures.
    #[arg(long)]
    pub target_failures: Option<u64>,
    /// Also write the layout, decoding graph and the first N trials.
    #[arg(long)]
    pub dump: Option<u64>,
}

/// Grid and statistics shared by every threshold sweep.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepArgs {
    #[arg(long, value_delimiter = ',')]
    pub distances: Option<Vec<usize>>,
    /// Trials per grid point.
    #[arg(long)]
    pub trials: Option<u64>,
    /// Fixed grid start; without it the crossing is bracketed automatically.
    #[arg(long)]
    pub p_min: Option<f64>,
    #[arg(long)]
    pub p_max: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long)]
    pub bootstrap: Option<usize>,
    /// Trials per point of the automatic bracketing scan.
    #[arg(long)]
    pub coarse_trials: Option<u64>,
    /// Half-width of the automatic grid relative to the bracketed crossing.
    #[arg(long)]
    pub rel_width: Option<f64>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThresholdArgs {
    /// Erasure fractions, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub re: Option<Vec<f64>>,
    #[arg(long)]
    pub pm: Option<f64>,
    #[command(flatten)]
    #[serde(skip)]
    pub sweep: SweepArgs,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExponentArgs {
    #[arg(short, long)]
    pub distance: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    pub re: Option<Vec<f64>>,
    /// Thresholds matching `--re`; measured with the sweep settings when absent.
    #[arg(long, value_delimiter = ',')]
    pub p_th: Option<Vec<f64>>,
    /// Fit window as fractions of the threshold, `lo,hi`.
    #[arg(long, value_delimiter = ',')]
    pub window: Option<Vec<f64>>,
    #[arg(long)]
    pub fit_points: Option<usize>,
    #[arg(long)]
    pub target_failures: Option<u64>,
    #[arg(long)]
    pub max_trials: Option<u64>,
    #[command(flatten)]
    #[serde(skip)]
    pub sweep: SweepArgs,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BiasedArgs {
    /// Bias values, comma separated; `inf` for pure dephasing.
    #[arg(long, value_delimiter = ',')]
    pub eta: Option<Vec<f64>>,
    #[command(flatten)]
    #[serde(skip)]
    pub sweep: SweepArgs,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpamArgs {
    #[arg(long)]
    pub re: Option<f64>,
    /// SPAM rates, comma separated; `p` ties p_m to the gate error.
    #[arg(long, value_delimiter = ',')]
    pub pm: Option<Vec<SpamArg>>,
    #[command(flatten)]
    #[serde(skip)]
    pub sweep: SweepArgs,
}

/// Rydberg decay and gate settings shared by `gate` and `lindblad`.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicsArgs {
    /// Gate duration in units of the Rydberg lifetime.
    #[arg(long)]
    pub gamma_tg: Option<f64>,
    /// Blockade shift in units of the decay rate.
    #[arg(long)]
    pub v_over_gamma: Option<f64>,
    /// Fraction of decays returning to the qubit levels.
    #[arg(long)]
    pub gamma_q: Option<f64>,
    /// Fraction of blackbody transitions to nearby Rydberg levels.
    #[arg(long)]
    pub gamma_b: Option<f64>,
    /// Fraction of radiative decays to the ground state.
    #[arg(long)]
    pub gamma_r: Option<f64>,
    /// Integrator step relative to the inverse blockade shift.
    #[arg(long)]
    pub courant: Option<f64>,
    /// Integrator step relative to the inverse Rabi frequency.
    #[arg(long)]
    pub resolution: Option<f64>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GateArgs {
    /// Initial-state weights of |00>, |01>+|10> and |11>.
    #[arg(long, value_delimiter = ',')]
    pub initial: Option<Vec<f64>>,
    #[command(flatten)]
    #[serde(skip)]
    pub physics: PhysicsArgs,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LindbladArgs {
    /// Scan the gate duration instead of simulating one point.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub scan: Option<bool>,
    #[arg(long)]
    pub scan_min: Option<f64>,
    #[arg(long)]
    pub scan_max: Option<f64>,
    #[arg(long)]
    pub scan_points: Option<usize>,
    #[command(flatten)]
    #[serde(skip)]
    pub physics: PhysicsArgs,
}

/// A SPAM setting: a fixed probability or `p` (tied to the gate error).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpamArg {
    Fixed(f64),
    Tied,
}

impl FromStr for SpamArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "p" | "P" => Ok(SpamArg::Tied),
            x => x.parse().map(SpamArg::Fixed).map_err(|e| format!("'{x}' is neither a probability nor 'p': {e}")),
        }
    }
}

impl Serialize for SpamArg {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            SpamArg::Fixed(x) => s.serialize_f64(*x),
            SpamArg::Tied => s.serialize_str("p"),
        }
    }
}

impl<'de> Deserialize<'de> for SpamArg {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(x) => Ok(SpamArg::Fixed(x)),
            Repr::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}
