//! Two-atom level structure, Hamiltonian and decay channels.

use super::pulse::Segment;
use crate::config::GatePhysicsConfig;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Per-atom basis: qubit levels, the driven Rydberg level, a blackbody
/// sink `P` and the ground state `G` reached by radiative decay.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Level {
    Zero = 0,
    One = 1,
    Rydberg = 2,
    P = 3,
    G = 4,
}

impl Level {
    pub const ALL: [Level; 5] = [Level::Zero, Level::One, Level::Rydberg, Level::P, Level::G];

    /// Detection outcome if the gate ended now: the Rydberg levels are
    /// ionised and seen as B, the ground state as R.
    pub fn outcome(self) -> Outcome {
        match self {
            Level::Zero | Level::One => Outcome::Q,
            Level::Rydberg | Level::P => Outcome::B,
            Level::G => Outcome::R,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Q,
    R,
    B,
}

pub const LEVELS: usize = 5;
pub const DIM: usize = LEVELS * LEVELS;

pub fn index(a: Level, b: Level) -> usize {
    a as usize * LEVELS + b as usize
}

pub fn levels(i: usize) -> (Level, Level) {
    (Level::ALL[i / LEVELS], Level::ALL[i % LEVELS])
}

/// Computational basis |00>, |01>, |10>, |11> as indices.
pub const COMPUTATIONAL: [usize; 4] = [0, 1, LEVELS, LEVELS + 1];

/// Final populations grouped by detection outcome, symmetric pairs merged.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct SubspacePopulations {
    pub qq: f64,
    pub qr: f64,
    pub qb: f64,
    pub rb: f64,
    pub rr: f64,
    pub bb: f64,
}

impl SubspacePopulations {
    pub fn from_diagonal(diag: impl Fn(usize) -> f64) -> Self {
        let mut s = Self::default();
        for i in 0..DIM {
            let (a, b) = levels(i);
            let p = diag(i);
            let slot = match (a.outcome(), b.outcome()) {
                (Outcome::Q, Outcome::Q) => &mut s.qq,
                (Outcome::Q, Outcome::R) | (Outcome::R, Outcome::Q) => &mut s.qr,
                (Outcome::Q, Outcome::B) | (Outcome::B, Outcome::Q) => &mut s.qb,
                (Outcome::R, Outcome::B) | (Outcome::B, Outcome::R) => &mut s.rb,
                (Outcome::R, Outcome::R) => &mut s.rr,
                (Outcome::B, Outcome::B) => &mut s.bb,
            };
            *slot += p;
        }
        s
    }

    pub fn total(&self) -> f64 {
        self.qq + self.qr + self.qb + self.rb + self.rr + self.bb
    }

    /// Heralded erasure: any outcome other than QQ and BB.
    pub fn erasure(&self) -> f64 {
        self.qr + self.qb + self.rb + self.rr
    }

    pub fn scaled(&self, w: f64) -> Self {
        Self { qq: w * self.qq, qr: w * self.qr, qb: w * self.qb, rb: w * self.rb, rr: w * self.rr, bb: w * self.bb }
    }

    pub fn add(&self, o: &Self) -> Self {
        Self { qq: self.qq + o.qq, qr: self.qr + o.qr, qb: self.qb + o.qb, rb: self.rb + o.rb, rr: self.rr + o.rr, bb: self.bb + o.bb }
    }
}

/// `H_eff = H - (i/2) sum_k L_k^dag L_k` as a sparse list of entries,
/// with the jump operators alongside.
#[derive(Debug, Clone)]
pub struct Generator {
    pub entries: Vec<(usize, usize, Complex64)>,
    pub jumps: Vec<Jump>,
    /// Largest |entry|, which bounds the explicit step size.
    pub max_rate: f64,
}

/// `sqrt(rate) |to><Rydberg|` acting on one atom.
#[derive(Debug, Clone, Copy)]
pub struct Jump {
    pub atom: usize,
    pub to: Level,
    pub rate: f64,
}

impl Generator {
    pub fn new(cfg: &GatePhysicsConfig, seg: &Segment) -> Self {
        use Level::*;
        let mut dense = vec![Complex64::default(); DIM * DIM];
        let mut add = |i: usize, j: usize, v: Complex64| dense[i * DIM + j] += v;
        let blocked = |i: usize| {
            let (a, b) = levels(i);
            match (a, b) {
                (Rydberg, Rydberg) => cfg.v_rr.is_infinite(),
                (Rydberg, P) | (P, Rydberg) => cfg.v_rp.is_infinite(),
                _ => false,
            }
        };
        let half = seg.omega * 0.5;
        for other in Level::ALL {
            for atom in 0..2 {
                let pair = |x: Level| if atom == 0 { index(x, other) } else { index(other, x) };
                let (one, ryd) = (pair(One), pair(Rydberg));
                if !blocked(ryd) {
                    add(ryd, one, half);
                    add(one, ryd, half.conj());
                }
                add(ryd, ryd, Complex64::new(seg.delta, -0.5 * cfg.gamma));
            }
        }
        let finite = |v: f64| if v.is_finite() { v } else { 0.0 };
        add(index(Rydberg, Rydberg), index(Rydberg, Rydberg), finite(cfg.v_rr).into());
        add(index(P, P), index(P, P), finite(cfg.v_pp).into());
        add(index(Rydberg, P), index(P, Rydberg), finite(cfg.v_rp).into());
        add(index(P, Rydberg), index(Rydberg, P), finite(cfg.v_rp).into());

        let entries: Vec<_> = (0..DIM * DIM)
            .filter(|&k| dense[k] != Complex64::default())
            .map(|k| (k / DIM, k % DIM, dense[k]))
            .collect();
        let max_rate = entries.iter().map(|e| e.2.norm()).fold(0.0, f64::max);
        let mut jumps = Vec::new();
        for atom in 0..2 {
            for (to, rate) in [(G, cfg.gamma_r()), (P, cfg.gamma_b()), (Zero, 0.5 * cfg.gamma_q()), (One, 0.5 * cfg.gamma_q())] {
                if rate > 0.0 {
                    jumps.push(Jump { atom, to, rate });
                }
            }
        }
        Self { entries, jumps, max_rate }
    }

    /// `out = -i H_eff psi`.
    pub fn apply_pure(&self, psi: &[Complex64], out: &mut [Complex64]) {
        out.iter_mut().for_each(|x| *x = Complex64::default());
        let mi = Complex64::new(0.0, -1.0);
        for &(i, j, h) in &self.entries {
            out[i] += mi * h * psi[j];
        }
    }

    /// Lindblad right-hand side on a row-major density matrix (or any
    /// operator, Hermitian or not).
    pub fn apply_lindblad(&self, rho: &[Complex64], out: &mut [Complex64]) {
        out.iter_mut().for_each(|x| *x = Complex64::default());
        let mi = Complex64::new(0.0, -1.0);
        for &(i, k, h) in &self.entries {
            // -i H rho: row i gains h * row k.
            let a = mi * h;
            let (dst, src) = (i * DIM, k * DIM);
            for c in 0..DIM {
                out[dst + c] += a * rho[src + c];
            }
            // +i rho H^dag: column i gains conj(h) * column k.
            let b = -mi * h.conj();
            for r in 0..DIM {
                out[r * DIM + i] += b * rho[r * DIM + k];
            }
        }
        for jump in &self.jumps {
            for x in Level::ALL {
                for y in Level::ALL {
                    let (from_row, from_col, to_row, to_col) = if jump.atom == 0 {
                        (index(Level::Rydberg, x), index(Level::Rydberg, y), index(jump.to, x), index(jump.to, y))
                    } else {
                        (index(x, Level::Rydberg), index(y, Level::Rydberg), index(x, jump.to), index(y, jump.to))
                    };
                    out[to_row * DIM + to_col] += jump.rate * rho[from_row * DIM + from_col];
                }
            }
        }
    }
}
