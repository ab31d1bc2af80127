//! Position blur during destructive fluorescence imaging, which sets how
//! reliably an erasure can be assigned to a tweezer site.

use crate::constants::*;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// SI units throughout.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetectionBudgetConfig {
    /// Imaging transition linewidth, rad/s.
    pub gamma_img: f64,
    pub wavelength: f64,
    pub mass: f64,
    pub n_photons: f64,
    /// Initial velocity, from electron recoil for an ion.
    pub v0: f64,
    /// Stray electric field, V/m.
    pub field: f64,
    pub charge: f64,
    /// Tweezer spacing.
    pub spacing: f64,
}

impl DetectionBudgetConfig {
    /// Yb-171 imaged on 1S0-1P1, at rest.
    pub fn yb_neutral() -> Self {
        Self {
            gamma_img: YB_1P1_LINEWIDTH,
            wavelength: YB_1P1_WAVELENGTH,
            mass: MASS_YB171 * ATOMIC_MASS_UNIT,
            n_photons: 200.0,
            v0: 0.0,
            field: 0.0,
            charge: 0.0,
            spacing: 5e-6,
        }
    }

    /// Li-6 on the D2 line, at rest.
    pub fn li_neutral() -> Self {
        Self { gamma_img: LI_D2_LINEWIDTH, wavelength: LI_D2_WAVELENGTH, mass: MASS_LI6 * ATOMIC_MASS_UNIT, ..Self::yb_neutral() }
    }

    /// Yb+ after autoionisation from 6p1/2 np, with 1 mV/cm stray field.
    pub fn yb_ion() -> Self {
        let mass = MASS_YB171 * ATOMIC_MASS_UNIT;
        Self {
            gamma_img: YB_ION_LINEWIDTH,
            wavelength: YB_ION_WAVELENGTH,
            mass,
            n_photons: 200.0,
            v0: recoil_velocity(27_100.0, mass),
            field: 0.1,
            charge: ELEMENTARY_CHARGE,
            spacing: 5e-6,
        }
    }

    pub fn wavenumber(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.wavelength
    }

    pub fn recoil_velocity(&self) -> f64 {
        HBAR * self.wavenumber() / self.mass
    }

    /// Imaging time needed to scatter `n` photons at rate Γ/2.
    pub fn imaging_time(&self, n: f64) -> f64 {
        2.0 * n / self.gamma_img
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [("gamma_img", self.gamma_img), ("wavelength", self.wavelength), ("mass", self.mass), ("spacing", self.spacing)];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidConfig(format!("{name} = {v} must be positive")));
            }
        }
        let non_negative = [("n_photons", self.n_photons), ("v0", self.v0), ("field", self.field), ("charge", self.charge)];
        for (name, v) in non_negative {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::InvalidConfig(format!("{name} = {v} must be non-negative")));
            }
        }
        Ok(())
    }
}

/// Ion recoil speed when the ejected electron carries `energy_cm` (cm^-1).
pub fn recoil_velocity(energy_cm: f64, mass: f64) -> f64 {
    (2.0 * wavenumber_to_joule(energy_cm) * ELECTRON_MASS).sqrt() / mass
}

/// RMS displacement of an atom starting at rest after imaging for `t`,
/// from recoil momentum diffusion: `sqrt(ħ²k² t³ Γ / (18 m²))`.
pub fn neutral_atom_spread(cfg: &DetectionBudgetConfig, t: f64) -> f64 {
    let hk_m = HBAR * cfg.wavenumber() / cfg.mass;
    (hk_m * hk_m * t.max(0.0).powi(3) * cfg.gamma_img / 18.0).sqrt()
}

/// The figure of merit `1/(m λ Γ)`: position spread at a fixed number of
/// detected photons is proportional to it.
pub fn spread_figure_of_merit(cfg: &DetectionBudgetConfig) -> f64 {
    1.0 / (cfg.mass * cfg.wavelength * cfg.gamma_img)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IonSpread {
    /// Ballistic displacement from the initial velocity, `2 v0 N / Γ`.
    pub recoil: f64,
    /// Drift in the stray field, `(qE / 2m) (2N / Γ)²`.
    pub field_drift: f64,
}

/// Ion blur after `n_photons` scattered photons. The recoil term dominates
/// the momentum diffusion term below about 10^6 photons, so only it is kept.
pub fn ion_spread(cfg: &DetectionBudgetConfig, n_photons: f64) -> IonSpread {
    let t = cfg.imaging_time(n_photons.max(0.0));
    IonSpread { recoil: cfg.v0 * t, field_drift: cfg.charge * cfg.field / (2.0 * cfg.mass) * t * t }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neutral_scaling() {
        let cfg = DetectionBudgetConfig::yb_neutral();
        assert_eq!(neutral_atom_spread(&cfg, 0.0), 0.0);
        let r = neutral_atom_spread(&cfg, 4e-6) / neutral_atom_spread(&cfg, 1e-6);
        assert!((r - 8.0).abs() < 1e-12);
    }

    #[test]
    fn ion_values() {
        let cfg = DetectionBudgetConfig::yb_ion();
        assert!((cfg.v0 - 3.5).abs() < 0.05, "{}", cfg.v0);
        assert_eq!(ion_spread(&cfg, 0.0).recoil, 0.0);
        let one = ion_spread(&DetectionBudgetConfig { v0: 3.5, ..cfg }, 1.0).recoil;
        assert!((one - 58.6e-9).abs() < 0.1e-9, "{one}");
        let drift = ion_spread(&cfg, 200.0).field_drift;
        assert!((drift / 316e-9 - 1.0).abs() < 0.01, "{drift}");
    }

    #[test]
    fn recoil_dominates_diffusion() {
        let cfg = DetectionBudgetConfig::yb_ion();
        assert!((cfg.v0 / cfg.recoil_velocity() / 550.0 - 1.0).abs() < 0.1);
    }
}
