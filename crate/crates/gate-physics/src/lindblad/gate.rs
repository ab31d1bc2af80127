use super::integrate::{evolve_operator, evolve_pure, StepControl};
use super::model::{index, Level, SubspacePopulations, COMPUTATIONAL, DIM};
use super::pulse::PulseSequence;
use crate::coefficients::Trajectory;
use crate::config::GatePhysicsConfig;
use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::Serialize;

/// Largest tolerated change of the trace over one gate.
pub const TRACE_TOLERANCE: f64 = 1e-6;

/// The channel restricted to the computational block:
/// `m[i][j][k][l] = <k| S(|i><j|) |l>` over |00>, |01>, |10>, |11>.
#[derive(Debug, Clone, PartialEq)]
pub struct ComputationalMap {
    pub m: [[[[Complex64; 4]; 4]; 4]; 4],
}

impl ComputationalMap {
    /// Map of a pure evolution with computational block `u[k][i] = <k|U|i>`.
    pub fn from_block(u: &[[Complex64; 4]; 4]) -> Self {
        let mut m = [[[[Complex64::default(); 4]; 4]; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    for l in 0..4 {
                        m[i][j][k][l] = u[k][i] * u[l][j].conj();
                    }
                }
            }
        }
        Self { m }
    }

    /// Mean probability of staying in the computational block.
    pub fn survival(&self) -> f64 {
        (0..4).map(|i| (0..4).map(|k| self.m[i][i][k][k].re).sum::<f64>()).sum::<f64>() / 4.0
    }

    /// Process fidelity against `diag(1, e^{iφ}, e^{iφ}, -e^{2iφ})`, a CZ
    /// followed by equal single-qubit phases.
    pub fn process_fidelity(&self, phi: f64) -> f64 {
        let u = cz_diagonal(phi);
        let mut acc = Complex64::default();
        for i in 0..4 {
            for j in 0..4 {
                acc += u[i].conj() * u[j] * self.m[i][j][i][j];
            }
        }
        acc.re / 16.0
    }

    pub fn average_fidelity(&self, phi: f64) -> f64 {
        (self.survival() + 4.0 * self.process_fidelity(phi)) / 5.0
    }

    /// Best single-qubit phase and the average fidelity it reaches.
    pub fn best_fidelity(&self) -> (f64, f64) {
        let tau = std::f64::consts::TAU;
        let n = 720;
        let f = |phi: f64| self.process_fidelity(phi);
        let mut best = (0..n).map(|k| tau * k as f64 / n as f64).max_by(|a, b| f(*a).total_cmp(&f(*b))).unwrap();
        // Golden-section refinement within one grid cell either side.
        let (mut lo, mut hi) = (best - tau / n as f64, best + tau / n as f64);
        let g = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..60 {
            let (a, b) = (hi - g * (hi - lo), lo + g * (hi - lo));
            if f(a) > f(b) {
                hi = b;
            } else {
                lo = a;
            }
        }
        best = 0.5 * (lo + hi);
        (best.rem_euclid(tau), self.average_fidelity(best))
    }
}

fn cz_diagonal(phi: f64) -> [Complex64; 4] {
    let e = Complex64::from_polar(1.0, phi);
    [Complex64::new(1.0, 0.0), e, e, -e * e]
}

/// Populations and computational block after evolving one initial operator.
#[derive(Debug, Clone, PartialEq)]
pub struct EvolvedState {
    pub rho: Vec<Complex64>,
    pub populations: SubspacePopulations,
    pub trace: f64,
}

/// Evolve a row-major 25x25 density matrix through the pulse.
pub fn evolve(pulse: &PulseSequence, cfg: &GatePhysicsConfig, rho0: &[Complex64], control: StepControl) -> Result<EvolvedState> {
    cfg.validate()?;
    if rho0.len() != DIM * DIM {
        return Err(Error::InvalidConfig(format!("density matrix has {} entries, expected {}", rho0.len(), DIM * DIM)));
    }
    let trace0: f64 = (0..DIM).map(|i| rho0[i * DIM + i].re).sum();
    if (trace0 - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidConfig(format!("initial state has trace {trace0}")));
    }
    let mut rho = rho0.to_vec();
    evolve_operator(pulse, cfg, &mut rho, control)?;
    let trace: f64 = (0..DIM).map(|i| rho[i * DIM + i].re).sum();
    if (trace - 1.0).abs() > TRACE_TOLERANCE {
        return Err(Error::TraceDrift(trace - 1.0));
    }
    let populations = SubspacePopulations::from_diagonal(|i| rho[i * DIM + i].re);
    Ok(EvolvedState { rho, populations, trace })
}

pub fn pure_density(psi: &[Complex64]) -> Vec<Complex64> {
    let mut rho = vec![Complex64::default(); DIM * DIM];
    for i in 0..DIM {
        for j in 0..DIM {
            rho[i * DIM + j] = psi[i] * psi[j].conj();
        }
    }
    rho
}

pub fn basis_state(i: usize) -> Vec<Complex64> {
    let mut psi = vec![Complex64::default(); DIM];
    psi[i] = Complex64::new(1.0, 0.0);
    psi
}

/// Noiseless amplitudes sampled at every integration step.
pub fn noiseless_trajectory(pulse: &PulseSequence, cfg: &GatePhysicsConfig, control: StepControl) -> Result<Trajectory> {
    let clean = GatePhysicsConfig { gamma: 0.0, ..*cfg };
    clean.validate()?;
    let durations: Vec<f64> = pulse.segments.iter().map(|s| s.duration).collect();
    if durations.iter().any(|d| (d - durations[0]).abs() > 1e-12 * durations[0]) {
        return Err(Error::NonUniformGrid("segments of unequal length".into()));
    }
    let mut psi_r = Vec::new();
    let mut psi = basis_state(index(Level::Zero, Level::One));
    evolve_pure(pulse, &clean, &mut psi, control, |s| psi_r.push(s[index(Level::Zero, Level::Rydberg)]))?;
    let (mut psi_w, mut psi_rr) = (Vec::new(), Vec::new());
    let mut psi = basis_state(index(Level::One, Level::One));
    let w = std::f64::consts::FRAC_1_SQRT_2;
    evolve_pure(pulse, &clean, &mut psi, control, |s| {
        psi_w.push((s[index(Level::One, Level::Rydberg)] + s[index(Level::Rydberg, Level::One)]) * w);
        psi_rr.push(s[index(Level::Rydberg, Level::Rydberg)]);
    })?;
    Ok(Trajectory { t_g: pulse.duration(), psi_r, psi_w, psi_rr })
}

/// Computational block of the noiseless gate. |00> is never driven and
/// |10> mirrors |01> under atom exchange, so only two states are evolved.
pub fn unitary_block(pulse: &PulseSequence, cfg: &GatePhysicsConfig, control: StepControl) -> Result<[[Complex64; 4]; 4]> {
    let clean = GatePhysicsConfig { gamma: 0.0, ..*cfg };
    let mut u = [[Complex64::default(); 4]; 4];
    u[0][0] = Complex64::new(1.0, 0.0);
    for col in [1, 3] {
        let mut psi = basis_state(COMPUTATIONAL[col]);
        evolve_pure(pulse, &clean, &mut psi, control, |_| {})?;
        for (row, &k) in COMPUTATIONAL.iter().enumerate() {
            u[row][col] = psi[k];
        }
    }
    let swap = [0, 2, 1, 3];
    for k in 0..4 {
        u[swap[k]][2] = u[k][1];
    }
    Ok(u)
}

#[derive(Debug, Clone, Serialize)]
pub struct GateOutcome {
    /// Averaged over the four computational basis states.
    pub populations: SubspacePopulations,
    /// For |00>, |01>, |10>, |11>.
    pub per_state: [SubspacePopulations; 4],
    /// Average gate fidelity; erasures count as failures.
    pub fidelity: f64,
    /// Average gate fidelity given that no erasure was detected.
    pub conditional_fidelity: f64,
    /// Single-qubit phase of the reference CZ.
    pub phase: f64,
    pub p_e: f64,
    pub p_f: f64,
    /// Largest trace change over the basis inputs.
    pub trace_error: f64,
    #[serde(skip)]
    pub map: ComputationalMap,
}

impl GateOutcome {
    pub fn infidelity(&self) -> f64 {
        1.0 - self.fidelity
    }

    pub fn conditional_infidelity(&self) -> f64 {
        1.0 - self.conditional_fidelity
    }

    /// Erasure fraction with the conditional infidelity as Pauli error.
    pub fn erasure_fraction(&self) -> f64 {
        self.p_e / (self.p_e + self.conditional_infidelity())
    }
}

/// Full master-equation simulation of the gate on every computational
/// input operator.
pub fn simulate_gate(pulse: &PulseSequence, cfg: &GatePhysicsConfig, control: StepControl) -> Result<GateOutcome> {
    cfg.validate()?;
    let pairs: Vec<(usize, usize)> = (0..4).flat_map(|i| (i..4).map(move |j| (i, j))).collect();
    let run = |&(i, j): &(usize, usize)| -> Result<Vec<Complex64>> {
        let mut rho = vec![Complex64::default(); DIM * DIM];
        rho[COMPUTATIONAL[i] * DIM + COMPUTATIONAL[j]] = Complex64::new(1.0, 0.0);
        evolve_operator(pulse, cfg, &mut rho, control)?;
        Ok(rho)
    };
    let outputs: Vec<Result<Vec<Complex64>>> = crate::par_map(&pairs, run);

    let mut m = [[[[Complex64::default(); 4]; 4]; 4]; 4];
    let mut per_state = [SubspacePopulations::default(); 4];
    let mut trace_error: f64 = 0.0;
    for (&(i, j), rho) in pairs.iter().zip(outputs) {
        let rho = rho?;
        for k in 0..4 {
            for l in 0..4 {
                let v = rho[COMPUTATIONAL[k] * DIM + COMPUTATIONAL[l]];
                m[i][j][k][l] = v;
                m[j][i][l][k] = v.conj();
            }
        }
        if i == j {
            let trace: f64 = (0..DIM).map(|d| rho[d * DIM + d].re).sum();
            trace_error = trace_error.max((trace - 1.0).abs());
            per_state[i] = SubspacePopulations::from_diagonal(|d| rho[d * DIM + d].re);
        }
    }
    if trace_error > TRACE_TOLERANCE {
        return Err(Error::TraceDrift(trace_error));
    }
    let populations = per_state.iter().fold(SubspacePopulations::default(), |acc, p| acc.add(&p.scaled(0.25)));
    let map = ComputationalMap { m };
    let (phase, fidelity) = map.best_fidelity();
    // No erasure is heralded for QQ and for the undetectable BB outcome.
    let conditional_fidelity = fidelity / (populations.qq + populations.bb);
    Ok(GateOutcome {
        populations,
        per_state,
        fidelity,
        conditional_fidelity,
        phase,
        p_e: populations.erasure(),
        p_f: populations.bb,
        trace_error,
        map,
    })
}
