//! Self-calibration of the phase-slip pulse at Γ = 0.

use super::gate::{unitary_block, ComputationalMap};
use super::integrate::StepControl;
use super::pulse::{LpParameters, PulseSequence};
use crate::config::GatePhysicsConfig;
use crate::error::{Error, Result};
use serde::Serialize;
use std::sync::OnceLock;

#[derive(Debug, Clone, Serialize)]
pub struct Calibration {
    pub params: LpParameters,
    pub pulse: PulseSequence,
    /// `1 - F` of the noiseless gate at the calibrated point.
    pub infidelity: f64,
    pub evaluations: usize,
}

impl Calibration {
    pub fn gate_time_omega(&self) -> f64 {
        self.params.gate_time_omega()
    }
}

/// Noiseless gate infidelity for pulse shape `p`.
pub fn pulse_infidelity(p: LpParameters, omega: f64, v_rr: f64, control: StepControl) -> Result<f64> {
    let cfg = GatePhysicsConfig { gamma: 0.0, omega, v_rr, v_rp: v_rr, v_pp: v_rr, t_g: 2.0 * p.tau_omega / omega, ..GatePhysicsConfig::default() };
    let block = unitary_block(&PulseSequence::lp(omega, p), &cfg, control)?;
    Ok(1.0 - ComputationalMap::from_block(&block).best_fidelity().1)
}

fn nelder_mead(f: impl Fn([f64; 3]) -> f64, start: [f64; 3], step: [f64; 3], tol: f64, max_eval: usize) -> ([f64; 3], f64, usize) {
    let mut pts: Vec<([f64; 3], f64)> = Vec::with_capacity(4);
    pts.push((start, f(start)));
    for k in 0..3 {
        let mut x = start;
        x[k] += step[k];
        pts.push((x, f(x)));
    }
    let mut evals = 4;
    let comb = |a: [f64; 3], b: [f64; 3], t: f64| [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]), a[2] + t * (b[2] - a[2])];
    while evals < max_eval {
        pts.sort_by(|a, b| a.1.total_cmp(&b.1));
        if pts[3].1 - pts[0].1 < tol {
            break;
        }
        let mut c = [0.0; 3];
        for p in &pts[..3] {
            for k in 0..3 {
                c[k] += p.0[k] / 3.0;
            }
        }
        let worst = pts[3];
        let refl = comb(c, worst.0, -1.0);
        let fr = f(refl);
        evals += 1;
        if fr < pts[0].1 {
            let exp = comb(c, worst.0, -2.0);
            let fe = f(exp);
            evals += 1;
            pts[3] = if fe < fr { (exp, fe) } else { (refl, fr) };
        } else if fr < pts[2].1 {
            pts[3] = (refl, fr);
        } else {
            let con = if fr < worst.1 { comb(c, worst.0, -0.5) } else { comb(c, worst.0, 0.5) };
            let fc = f(con);
            evals += 1;
            if fc < worst.1.min(fr) {
                pts[3] = (con, fc);
            } else {
                let best = pts[0].0;
                for p in pts.iter_mut().skip(1) {
                    p.0 = comb(best, p.0, 0.5);
                    p.1 = f(p.0);
                    evals += 1;
                }
            }
        }
    }
    pts.sort_by(|a, b| a.1.total_cmp(&b.1));
    (pts[0].0, pts[0].1, evals)
}

fn params(x: [f64; 3]) -> LpParameters {
    LpParameters { delta_over_omega: x[0], tau_omega: x[1], xi: x[2] }
}

/// Best pulse shape under perfect blockade, found once by a coarse grid
/// over (Δ/Ω, τΩ, ξ) followed by simplex refinement.
pub fn blockade_limit_parameters() -> LpParameters {
    static CACHE: OnceLock<LpParameters> = OnceLock::new();
    *CACHE.get_or_init(|| {
        let control = StepControl { courant: 0.3, resolution: 0.05 };
        let f = |x: [f64; 3]| pulse_infidelity(params(x), 1.0, f64::INFINITY, control).unwrap_or(1.0);
        let mut grid = Vec::new();
        for a in 0..=10 {
            for b in 0..=14 {
                for c in 0..16 {
                    grid.push([0.1 * a as f64, 2.5 + 0.25 * b as f64, std::f64::consts::TAU * c as f64 / 16.0]);
                }
            }
        }
        let scores: Vec<f64> = crate::par_map(&grid, |x| f(*x));
        let mut order: Vec<usize> = (0..grid.len()).collect();
        order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
        order
            .iter()
            .take(8)
            .map(|&k| nelder_mead(f, grid[k], [0.05, 0.1, 0.2], 1e-13, 600))
            .min_by(|a, b| {
                // Prefer the shortest gate among equally good solutions.
                let key = |r: &([f64; 3], f64, usize)| (r.1 > 1e-8, r.0[1]);
                key(a).partial_cmp(&key(b)).unwrap()
            })
            .map(|(x, _, _)| params(x))
            .expect("non-empty grid")
    })
}

/// Calibrate the pulse at finite blockade. Starts from the perfect-blockade
/// optimum, which is close when `v_rr / omega` is large.
pub fn calibrate_pulse(omega: f64, v_rr: f64, control: StepControl) -> Result<Calibration> {
    if !(omega > 0.0 && v_rr > 0.0) {
        return Err(Error::InvalidConfig(format!("omega = {omega}, v_rr = {v_rr}")));
    }
    let seed = blockade_limit_parameters();
    let f = |x: [f64; 3]| pulse_infidelity(params(x), omega, v_rr, control).unwrap_or(1.0);
    let (x, residual, evaluations) = nelder_mead(f, [seed.delta_over_omega, seed.tau_omega, seed.xi], [0.01, 0.01, 0.01], 1e-14, 400);
    if residual > 1e-4 {
        return Err(Error::Calibration { residual });
    }
    let params = params(x);
    Ok(Calibration { params, pulse: PulseSequence::lp(omega, params), infidelity: residual, evaluations })
}
