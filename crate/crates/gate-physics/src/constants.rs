//! Physical constants (CODATA 2018 exact or recommended values) and the
//! atomic data used by the detection budget.

/// Reduced Planck constant, J s (exact).
pub const HBAR: f64 = 1.054_571_817e-34;
/// Planck constant, J s (exact).
pub const PLANCK: f64 = 6.626_070_15e-34;
/// Speed of light, m/s (exact).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Elementary charge, C (exact).
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
/// Unified atomic mass unit, kg (CODATA 2018).
pub const ATOMIC_MASS_UNIT: f64 = 1.660_539_066_60e-27;
/// Electron mass, kg (CODATA 2018).
pub const ELECTRON_MASS: f64 = 9.109_383_701_5e-31;

/// Atomic masses in u (AME2016).
pub const MASS_YB171: f64 = 170.936_330;
pub const MASS_LI6: f64 = 6.015_122_887;

/// Yb 1S0-1P1 imaging line, rounded as quoted for the budget.
pub const YB_1P1_WAVELENGTH: f64 = 399.0e-9;
pub const YB_1P1_LINEWIDTH: f64 = 2.0 * std::f64::consts::PI * 28.0e6;
/// Yb+ 2S1/2-2P1/2 imaging line, rounded as quoted for the budget.
pub const YB_ION_WAVELENGTH: f64 = 369.0e-9;
pub const YB_ION_LINEWIDTH: f64 = 2.0 * std::f64::consts::PI * 19.0e6;
/// Li D2 line.
pub const LI_D2_WAVELENGTH: f64 = 670.977e-9;
pub const LI_D2_LINEWIDTH: f64 = 2.0 * std::f64::consts::PI * 5.872e6;

/// Energy of a wavenumber given in cm^-1, in J.
pub fn wavenumber_to_joule(cm_inv: f64) -> f64 {
    cm_inv * 100.0 * PLANCK * SPEED_OF_LIGHT
}

/// Product of the LP gate duration and the Rabi frequency.
pub const LP_GATE_TIME_OMEGA: f64 = 8.586;
