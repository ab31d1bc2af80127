use super::calibrate::{calibrate_pulse, Calibration};
use super::gate::{noiseless_trajectory, simulate_gate, GateOutcome};
use super::integrate::StepControl;
use super::pulse::PulseSequence;
use crate::channels::{channel_probabilities, ChannelProbabilities, InitialDistribution};
use crate::coefficients::{trajectory_coefficients, TrajectoryCoefficients};
use crate::config::{BranchingFractions, GatePhysicsConfig};
use crate::error::Result;
use serde::Serialize;

/// One point of a gate-duration scan, with the analytic model evaluated on
/// the same calibrated pulse.
#[derive(Debug, Clone, Serialize)]
pub struct ScanPoint {
    pub gamma_tg: f64,
    pub v_over_gamma: f64,
    pub omega_t_g: f64,
    pub calibration_infidelity: f64,
    pub outcome: GateOutcome,
    pub coefficients: TrajectoryCoefficients,
    pub analytic: ChannelProbabilities,
}

impl ScanPoint {
    pub fn infidelity(&self) -> f64 {
        self.outcome.infidelity()
    }

    pub fn conditional_infidelity(&self) -> f64 {
        self.outcome.conditional_infidelity()
    }
}

/// Calibrate the pulse for `Γ t_g = gamma_tg` and rescale Ω so that the
/// calibrated gate lasts exactly `t_g`. Γ = 1.
pub fn calibrated_config(
    gamma_tg: f64,
    v_over_gamma: f64,
    branching: BranchingFractions,
    control: StepControl,
) -> Result<(GatePhysicsConfig, Calibration)> {
    let first = GatePhysicsConfig::from_gamma_tg(gamma_tg, v_over_gamma).with_branching(branching);
    first.validate()?;
    let cal = calibrate_pulse(first.omega, first.v_rr, control)?;
    let omega = cal.gate_time_omega() / gamma_tg;
    let pulse = PulseSequence::lp(omega, cal.params);
    Ok((GatePhysicsConfig { omega, ..first }, Calibration { pulse, ..cal }))
}

/// Calibrate at `Γ t_g = gamma_tg` and simulate the noisy gate.
pub fn gate_at(gamma_tg: f64, v_over_gamma: f64, branching: BranchingFractions, control: StepControl) -> Result<ScanPoint> {
    let (cfg, cal) = calibrated_config(gamma_tg, v_over_gamma, branching, control)?;
    let outcome = simulate_gate(&cal.pulse, &cfg, control)?;
    let traj = noiseless_trajectory(&cal.pulse, &cfg, control)?;
    let coefficients = trajectory_coefficients(&traj, cfg.omega, cfg.v_rr, cfg.v_rp)?;
    let analytic = channel_probabilities(&cfg, &coefficients, &InitialDistribution::BASIS_AVERAGE)?;
    Ok(ScanPoint {
        gamma_tg,
        v_over_gamma,
        omega_t_g: cal.gate_time_omega(),
        calibration_infidelity: cal.infidelity,
        outcome,
        coefficients,
        analytic,
    })
}

/// Gate error against gate duration at fixed `V/Γ`. Points are
/// independent and run in parallel.
pub fn sweep_gate_error(gamma_tg: &[f64], v_over_gamma: f64, branching: BranchingFractions, control: StepControl) -> Vec<Result<ScanPoint>> {
    crate::par_map(gamma_tg, |&g| gate_at(g, v_over_gamma, branching, control))
}

pub const SCAN_COLUMNS: [&str; 12] =
    ["gamma_tg", "infidelity", "p_e", "conditional_infidelity", "p_f", "r_e", "p_qr", "p_qb", "p_rb", "p_rr", "analytic_p_e", "analytic_r_e"];
