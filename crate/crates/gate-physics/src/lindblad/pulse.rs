use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Constant drive over `duration`. `omega` is the complex Rabi frequency
/// on |1> -> |r>, `delta` the Rydberg level shift.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub duration: f64,
    pub omega: Complex64,
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PulseSequence {
    pub segments: Vec<Segment>,
}

/// Shape of the two-segment phase-slip pulse, in units of Ω.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LpParameters {
    pub delta_over_omega: f64,
    /// Length of each segment times Ω.
    pub tau_omega: f64,
    /// Laser phase jump between the segments.
    pub xi: f64,
}

impl LpParameters {
    pub fn gate_time_omega(&self) -> f64 {
        2.0 * self.tau_omega
    }
}

impl PulseSequence {
    pub fn lp(omega: f64, p: LpParameters) -> Self {
        let duration = p.tau_omega / omega;
        let delta = p.delta_over_omega * omega;
        Self {
            segments: vec![
                Segment { duration, omega: Complex64::new(omega, 0.0), delta },
                Segment { duration, omega: Complex64::from_polar(omega, p.xi), delta },
            ],
        }
    }

    pub fn duration(&self) -> f64 {
        self.segments.iter().map(|s| s.duration).sum()
    }
}
