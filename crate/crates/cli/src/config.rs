//! TOML config file and the flag > file > default layering.

use crate::args::*;
use crate::error::{CliError, Result};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

/// The config file: global keys at the top level and one table per
/// command, plus the shared `[sweep]` and `[physics]` tables.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
    pub memory: Option<MemoryArgs>,
    pub threshold: Option<ThresholdArgs>,
    pub exponent: Option<ExponentArgs>,
    pub biased: Option<BiasedArgs>,
    pub spam: Option<SpamArgs>,
    pub sweep: Option<SweepArgs>,
    pub gate: Option<GateArgs>,
    pub lindblad: Option<LindbladArgs>,
    pub physics: Option<PhysicsArgs>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(CliError::io(format!("reading {}", path.display())))?;
        Self::parse(&text).map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))
    }

    /// Parse errors carry the line and column of the offending entry.
    pub fn parse(text: &str) -> std::result::Result<Self, toml::de::Error> {
        toml::from_str(text)
    }
}

/// Overlay the set fields of each layer onto the previous ones.
pub fn layered<T: Serialize + DeserializeOwned>(layers: &[Option<&T>]) -> Result<T> {
    let mut table = toml::Table::new();
    for layer in layers.iter().flatten() {
        let t = toml::Table::try_from(layer).map_err(|e| CliError::Usage(format!("invalid setting: {e}")))?;
        table.extend(t);
    }
    toml::Value::Table(table).try_into().map_err(|e| CliError::Usage(format!("invalid setting: {e}")))
}

pub fn global_defaults() -> GlobalArgs {
    GlobalArgs { seed: Some(0), threads: Some(0), out: Some(PathBuf::from("results")) }
}

pub fn memory_defaults() -> MemoryArgs {
    MemoryArgs {
        distance: Some(5),
        p: Some(0.01),
        re: Some(0.98),
        pm: Some(0.0),
        eta: None,
        trials: Some(10_000),
        target_failures: None,
        dump: None,
    }
}

pub fn sweep_defaults() -> SweepArgs {
    SweepArgs {
        distances: Some(vec![5, 7]),
        trials: Some(80_000),
        p_min: None,
        p_max: None,
        points: Some(6),
        bootstrap: Some(200),
        coarse_trials: Some(4_000),
        rel_width: Some(0.1),
    }
}

pub fn threshold_defaults() -> ThresholdArgs {
    ThresholdArgs { re: Some(vec![0.0, 0.98, 1.0]), pm: Some(0.0), sweep: SweepArgs::default() }
}

pub fn exponent_defaults() -> ExponentArgs {
    ExponentArgs {
        distance: Some(5),
        re: Some(vec![0.0, 0.98, 1.0]),
        p_th: None,
        window: Some(vec![0.2, 0.6]),
        fit_points: Some(5),
        target_failures: Some(1000),
        max_trials: Some(100_000_000),
        sweep: SweepArgs::default(),
    }
}

pub fn biased_defaults() -> BiasedArgs {
    BiasedArgs { eta: Some(vec![100.0, f64::INFINITY]), sweep: SweepArgs::default() }
}

pub fn spam_defaults() -> SpamArgs {
    SpamArgs {
        re: Some(0.98),
        pm: Some(vec![SpamArg::Fixed(0.0), SpamArg::Fixed(0.001), SpamArg::Fixed(0.005), SpamArg::Tied]),
        sweep: SweepArgs::default(),
    }
}

pub fn physics_defaults() -> PhysicsArgs {
    PhysicsArgs {
        gamma_tg: Some(2e-3),
        v_over_gamma: Some(1e6),
        gamma_q: Some(0.05),
        gamma_b: Some(0.61),
        gamma_r: Some(0.34),
        courant: Some(0.3),
        resolution: Some(0.02),
    }
}

pub fn gate_defaults() -> GateArgs {
    GateArgs { initial: Some(vec![0.25, 0.5, 0.25]), physics: PhysicsArgs::default() }
}

pub fn lindblad_defaults() -> LindbladArgs {
    LindbladArgs { scan: Some(false), scan_min: Some(1e-4), scan_max: Some(1e-2), scan_points: Some(5), physics: PhysicsArgs::default() }
}

/// Unwrap a setting that the defaults always provide.
pub fn req<T: Clone>(v: &Option<T>, name: &str) -> Result<T> {
    v.clone().ok_or_else(|| CliError::Usage(format!("missing setting '{name}'")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file_override_defaults() {
        let file = MemoryArgs { p: Some(0.02), trials: Some(5), ..Default::default() };
        let flags = MemoryArgs { trials: Some(7), ..Default::default() };
        let m = layered(&[Some(&memory_defaults()), Some(&file), Some(&flags)]).unwrap();
        assert_eq!((m.p, m.trials, m.distance), (Some(0.02), Some(7), Some(5)));
    }

    #[test]
    fn infinite_bias_round_trips() {
        let b = layered::<BiasedArgs>(&[Some(&biased_defaults())]).unwrap();
        assert_eq!(b.eta.unwrap()[1], f64::INFINITY);
        let cfg = ConfigFile::parse("[biased]\neta = [10.0, inf]\n[spam]\npm = [0.001, \"p\"]\n").unwrap();
        assert_eq!(cfg.biased.unwrap().eta.unwrap()[1], f64::INFINITY);
        assert_eq!(cfg.spam.unwrap().pm.unwrap(), vec![SpamArg::Fixed(0.001), SpamArg::Tied]);
    }

    #[test]
    fn errors_name_the_line() {
        let e = ConfigFile::parse("seed = 1\n[memory]\np = = 3\n").unwrap_err().to_string();
        assert!(e.contains("line 3"), "{e}");
        let e = ConfigFile::parse("seed = 1\n\n[memory]\nbogus = 3\n").unwrap_err().to_string();
        assert!(e.contains("line 4") && e.contains("bogus"), "{e}");
    }
}
