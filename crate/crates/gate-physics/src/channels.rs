//! Analytic probabilities of the erasure-detection outcomes after one
//! noisy CZ gate.

use crate::coefficients::TrajectoryCoefficients;
use crate::config::GatePhysicsConfig;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Probabilities of starting in |00>, in |01> or |10>, and in |11>.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InitialDistribution {
    pub p00: f64,
    pub p01: f64,
    pub p11: f64,
}

impl InitialDistribution {
    /// Uniform over the four computational basis states.
    pub const BASIS_AVERAGE: Self = Self { p00: 0.25, p01: 0.5, p11: 0.25 };

    pub fn validate(&self) -> Result<()> {
        let all = [self.p00, self.p01, self.p11];
        if all.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(Error::InvalidDistribution(format!("{self:?}")));
        }
        let sum: f64 = all.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidDistribution(format!("sums to {sum}")));
        }
        Ok(())
    }
}

impl Default for InitialDistribution {
    fn default() -> Self {
        Self::BASIS_AVERAGE
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelProbabilities {
    pub p_qr: f64,
    pub p_qb: f64,
    pub p_rb: f64,
    pub p_rr: f64,
    pub p_bb: f64,
    /// Detected erasure: sum of the QR, QB, RB and RR channels.
    pub p_e: f64,
    /// Undetectable leakage, the BB channel.
    pub p_f: f64,
    /// Probability of a decay back into the qubit manifold that is not
    /// re-excited, and therefore not heralded.
    pub p_undetected_decay: f64,
    /// Pauli infidelity: `p_undetected_decay` converted to average gate
    /// infidelity plus the no-jump term.
    pub p_p: f64,
    /// `p_e / (p_e + p_p)`.
    pub r_e: f64,
}

/// Average gate infidelity of a two-qubit error that occurs with
/// probability `q` and leaves no trace in the fidelity: `d/(d+1) q`, d = 4.
pub const EVENT_TO_INFIDELITY: f64 = 4.0 / 5.0;

/// Infidelity from reweighting towards |00> when no erasure is seen.
pub fn no_jump_infidelity(p_e: f64) -> f64 {
    (p_e / 4.0).powi(2)
}

pub fn channel_probabilities(cfg: &GatePhysicsConfig, c: &TrajectoryCoefficients, init: &InitialDistribution) -> Result<ChannelProbabilities> {
    cfg.validate()?;
    init.validate()?;
    let (gb, gr, gq) = (cfg.gamma_b() * cfg.t_g, cfg.gamma_r() * cfg.t_g, cfg.gamma_q() * cfg.t_g);
    let (p01, p11) = (init.p01, init.p11);

    let p_qr = p01 * gr * c.alpha + p11 * gr * c.beta * (1.0 - c.r_11);
    // From |01>, half the decays to Q land back in |01> and a fraction
    // R_01 of those are re-excited and end up as QB.
    let p_qb = p01 * (gb * c.alpha + 0.5 * gq * c.alpha * c.r_01)
        + p11 * (gb * c.beta * (1.0 - c.s) + gq * c.beta * (c.r_11 + c.r_11_prime) / 2.0);
    let p_rb = p11 * gr * c.beta * c.r_11;
    let p_rr = p11 * gr * gr * c.beta * c.beta_prime;
    let p_bb = p11 * (2.0 * gb * c.beta_double + gb * c.beta * c.s);

    let p_undetected_decay = p01 * 0.5 * gq * c.alpha * (1.0 - c.r_01)
        + p01 * 0.5 * gq * c.alpha
        + p11 * gq * c.beta * (1.0 - (c.r_11 + c.r_11_prime) / 2.0);

    let p_e = p_qr + p_qb + p_rb + p_rr;
    let p_p = EVENT_TO_INFIDELITY * p_undetected_decay + no_jump_infidelity(p_e);
    let named = [("P_QR", p_qr), ("P_QB", p_qb), ("P_RB", p_rb), ("P_RR", p_rr), ("P_BB", p_bb), ("p_e", p_e), ("p_p", p_p)];
    for (name, value) in named {
        if !(0.0..=1.0).contains(&value) {
            return Err(Error::ProbabilityOutOfRange { name, value });
        }
    }
    let r_e = if p_e + p_p > 0.0 { p_e / (p_e + p_p) } else { 0.0 };
    Ok(ChannelProbabilities { p_qr, p_qb, p_rb, p_rr, p_bb, p_e, p_f: p_bb, p_undetected_decay, p_p, r_e })
}
