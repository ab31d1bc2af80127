use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Durations in seconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CycleTimeConfig {
    pub t_g: f64,
    /// Erasure imaging after each parallel gate layer.
    pub t_e: f64,
    /// Atom replacement, done once per cycle.
    pub t_r: f64,
    /// Ancilla measurement.
    pub t_m: f64,
    /// Fraction of the gates that run in parallel.
    pub f_p: f64,
}

impl Default for CycleTimeConfig {
    fn default() -> Self {
        Self { t_g: 1e-6, t_e: 10e-6, t_r: 0.0, t_m: 20e-3, f_p: 0.1 }
    }
}

/// `(t_g + t_e) / f_p + t_r + t_m`.
pub fn cycle_time(cfg: &CycleTimeConfig) -> Result<f64> {
    if !(cfg.f_p > 0.0 && cfg.f_p <= 1.0) {
        return Err(Error::InvalidConfig(format!("parallel fraction {} must lie in (0, 1]", cfg.f_p)));
    }
    if [cfg.t_g, cfg.t_e, cfg.t_r, cfg.t_m].iter().any(|t| !(*t >= 0.0)) {
        return Err(Error::InvalidConfig("durations must be non-negative".into()));
    }
    Ok((cfg.t_g + cfg.t_e) / cfg.f_p + cfg.t_r + cfg.t_m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gate_layers_only() {
        let cfg = CycleTimeConfig { t_m: 0.0, ..Default::default() };
        assert!((cycle_time(&cfg).unwrap() - 110e-6).abs() < 1e-15);
    }

    #[test]
    fn measurement_dominates() {
        let t = cycle_time(&CycleTimeConfig { t_r: 300e-6, ..Default::default() }).unwrap();
        assert!((t - (20.11e-3 + 300e-6)).abs() < 1e-12);
    }

    #[test]
    fn fully_parallel() {
        let cfg = CycleTimeConfig { f_p: 1.0, t_r: 1e-4, ..Default::default() };
        assert!((cycle_time(&cfg).unwrap() - (11e-6 + 1e-4 + 20e-3)).abs() < 1e-15);
        assert!(cycle_time(&CycleTimeConfig { f_p: 0.0, ..cfg }).is_err());
        assert!(cycle_time(&CycleTimeConfig { f_p: 1.5, ..cfg }).is_err());
    }
}
