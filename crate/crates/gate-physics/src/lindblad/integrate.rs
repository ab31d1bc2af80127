//! Fixed-step fourth-order Runge-Kutta propagation.

use super::model::Generator;
use super::pulse::{PulseSequence, Segment};
use crate::config::GatePhysicsConfig;
use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// The step is the smaller of `courant / max_rate`, where `max_rate` is the
/// largest generator entry (the blockade shift when it is finite), and
/// `resolution / drive`, with `drive` the larger of |Ω| and |Δ|.
/// Populations converge as the fourth power of both.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepControl {
    pub courant: f64,
    pub resolution: f64,
}

impl Default for StepControl {
    fn default() -> Self {
        Self { courant: 0.3, resolution: 0.02 }
    }
}

impl StepControl {
    pub fn halved(self) -> Self {
        Self { courant: self.courant / 2.0, resolution: self.resolution / 2.0 }
    }

    fn steps(&self, seg: &Segment, gen: &Generator) -> Result<usize> {
        let drive = seg.omega.norm().max(seg.delta.abs());
        let rate = (gen.max_rate / self.courant).max(drive / self.resolution);
        let n = (seg.duration * rate).ceil().max(1.0);
        let duration = seg.duration;
        if !(n.is_finite() && n < 1e9) {
            return Err(Error::StepUnderflow(duration / n));
        }
        Ok(n as usize)
    }
}

struct Rk4 {
    k1: Vec<Complex64>,
    k2: Vec<Complex64>,
    k3: Vec<Complex64>,
    k4: Vec<Complex64>,
    tmp: Vec<Complex64>,
}

impl Rk4 {
    fn new(n: usize) -> Self {
        let z = vec![Complex64::default(); n];
        Self { k1: z.clone(), k2: z.clone(), k3: z.clone(), k4: z.clone(), tmp: z }
    }

    fn step(&mut self, y: &mut [Complex64], h: f64, f: impl Fn(&[Complex64], &mut [Complex64])) {
        let n = y.len();
        f(y, &mut self.k1);
        for i in 0..n {
            self.tmp[i] = y[i] + self.k1[i] * (0.5 * h);
        }
        f(&self.tmp, &mut self.k2);
        for i in 0..n {
            self.tmp[i] = y[i] + self.k2[i] * (0.5 * h);
        }
        f(&self.tmp, &mut self.k3);
        for i in 0..n {
            self.tmp[i] = y[i] + self.k3[i] * h;
        }
        f(&self.tmp, &mut self.k4);
        let c = h / 6.0;
        for i in 0..n {
            y[i] += (self.k1[i] + (self.k2[i] + self.k3[i]) * 2.0 + self.k4[i]) * c;
        }
    }
}

/// Propagate a state vector under the no-jump generator. `observe` sees
/// the initial state and the state after every step.
pub fn evolve_pure(
    pulse: &PulseSequence,
    cfg: &GatePhysicsConfig,
    psi: &mut [Complex64],
    control: StepControl,
    mut observe: impl FnMut(&[Complex64]),
) -> Result<()> {
    let mut rk = Rk4::new(psi.len());
    observe(psi);
    for seg in &pulse.segments {
        let gen = Generator::new(cfg, seg);
        let n = control.steps(seg, &gen)?;
        let h = seg.duration / n as f64;
        for _ in 0..n {
            rk.step(psi, h, |y, out| gen.apply_pure(y, out));
            observe(psi);
        }
    }
    Ok(())
}

/// Propagate a row-major operator under the full master equation.
pub fn evolve_operator(pulse: &PulseSequence, cfg: &GatePhysicsConfig, rho: &mut [Complex64], control: StepControl) -> Result<()> {
    let mut rk = Rk4::new(rho.len());
    for seg in &pulse.segments {
        let gen = Generator::new(cfg, seg);
        let n = control.steps(seg, &gen)?;
        let h = seg.duration / n as f64;
        for _ in 0..n {
            rk.step(rho, h, |y, out| gen.apply_lindblad(y, out));
        }
    }
    Ok(())
}
