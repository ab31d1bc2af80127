use crate::constants::LP_GATE_TIME_OMEGA;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Where a Rydberg decay ends up: a nearby Rydberg level by blackbody
/// transfer (B), the ground state (R), or back in the qubit manifold (Q).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BranchingFractions {
    pub b: f64,
    pub r: f64,
    pub q: f64,
}

impl Default for BranchingFractions {
    fn default() -> Self {
        Self { b: 0.61, r: 0.34, q: 0.05 }
    }
}

impl BranchingFractions {
    pub fn validate(&self) -> Result<()> {
        if [self.b, self.r, self.q].iter().any(|f| !(0.0..=1.0).contains(f)) {
            return Err(Error::InvalidConfig(format!("branching fractions must lie in [0, 1]: {self:?}")));
        }
        let sum = self.b + self.r + self.q;
        if (sum - 1.0).abs() > 1e-6 {
            return Err(Error::BranchingSum(sum));
        }
        Ok(())
    }
}

/// Rates are angular frequencies in a common unit; `t_g` is in the
/// reciprocal unit. Only products like `gamma * t_g` are physical.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GatePhysicsConfig {
    /// Total Rydberg decay rate.
    pub gamma: f64,
    pub branching: BranchingFractions,
    pub omega: f64,
    pub v_rr: f64,
    pub v_rp: f64,
    pub v_pp: f64,
    pub t_g: f64,
}

impl Default for GatePhysicsConfig {
    /// Γt_g = 2e-3 and V/Γ = 1e6.
    fn default() -> Self {
        Self::from_gamma_tg(2e-3, 1e6)
    }
}

impl GatePhysicsConfig {
    /// Units with Γ = 1. Ω follows from the LP gate time and all three
    /// interaction strengths equal `v_over_gamma`.
    pub fn from_gamma_tg(gamma_tg: f64, v_over_gamma: f64) -> Self {
        Self {
            gamma: 1.0,
            branching: BranchingFractions::default(),
            omega: LP_GATE_TIME_OMEGA / gamma_tg,
            v_rr: v_over_gamma,
            v_rp: v_over_gamma,
            v_pp: v_over_gamma,
            t_g: gamma_tg,
        }
    }

    pub fn with_branching(mut self, branching: BranchingFractions) -> Self {
        self.branching = branching;
        self
    }

    pub fn gamma_b(&self) -> f64 {
        self.gamma * self.branching.b
    }

    pub fn gamma_r(&self) -> f64 {
        self.gamma * self.branching.r
    }

    pub fn gamma_q(&self) -> f64 {
        self.gamma * self.branching.q
    }

    pub fn gamma_tg(&self) -> f64 {
        self.gamma * self.t_g
    }

    pub fn validate(&self) -> Result<()> {
        self.branching.validate()?;
        let fields = [("gamma", self.gamma), ("omega", self.omega), ("v_rr", self.v_rr), ("v_rp", self.v_rp), ("v_pp", self.v_pp), ("t_g", self.t_g)];
        for (name, v) in fields {
            // Infinite interactions mean perfect blockade.
            if v.is_nan() || v < 0.0 || (name != "v_rr" && name != "v_rp" && name != "v_pp" && v.is_infinite()) {
                return Err(Error::InvalidConfig(format!("{name} = {v}")));
            }
        }
        if self.omega == 0.0 || self.t_g == 0.0 {
            return Err(Error::InvalidConfig("omega and t_g must be positive".into()));
        }
        Ok(())
    }
}
