//! Time-averaged populations and re-excitation probabilities extracted
//! from the noiseless gate trajectory.

use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Noiseless amplitudes on a uniform grid `t_k = k t_g / (n - 1)`.
/// `psi_r` is the Rydberg amplitude starting from |01>, `psi_w` the
/// symmetric single-excitation amplitude starting from |11>, and `psi_rr`
/// the doubly excited amplitude starting from |11>.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub t_g: f64,
    pub psi_r: Vec<Complex64>,
    pub psi_w: Vec<Complex64>,
    pub psi_rr: Vec<Complex64>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.psi_r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.psi_r.is_empty()
    }

    pub fn dt(&self) -> f64 {
        self.t_g / (self.len() - 1) as f64
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        let dt = self.dt();
        (0..self.len()).map(move |k| k as f64 * dt)
    }

    fn validate(&self) -> Result<()> {
        let n = self.psi_r.len();
        if n < 3 || self.psi_w.len() != n || self.psi_rr.len() != n {
            return Err(Error::NonUniformGrid(format!(
                "need three equal-length series of at least 3 samples, got {}, {}, {}",
                n,
                self.psi_w.len(),
                self.psi_rr.len()
            )));
        }
        if !(self.t_g > 0.0) {
            return Err(Error::InvalidConfig(format!("t_g = {}", self.t_g)));
        }
        for k in 0..n {
            let norm = self.psi_w[k].norm_sqr() + self.psi_rr[k].norm_sqr();
            for norm in [self.psi_r[k].norm_sqr(), norm] {
                if !(norm <= 1.0 + 1e-6) {
                    return Err(Error::NonNormalized { index: k, norm });
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryCoefficients {
    pub alpha: f64,
    pub r_01: f64,
    pub beta: f64,
    pub r_11: f64,
    pub r_11_prime: f64,
    pub beta_prime: f64,
    /// `β Ω² / (2 V_rr²)`.
    pub beta_double: f64,
    /// `Ω² / (2 V_rp²)`.
    pub s: f64,
}

fn trapezoid(y: &[f64], dt: f64) -> f64 {
    let n = y.len();
    dt * (y.iter().sum::<f64>() - 0.5 * (y[0] + y[n - 1]))
}

/// Integrals use the trapezoid rule, so the error is second order in the
/// grid spacing. `omega`, `v_rr` and `v_rp` set the perturbative blockade
/// terms; infinite interactions give zero.
pub fn trajectory_coefficients(traj: &Trajectory, omega: f64, v_rr: f64, v_rp: f64) -> Result<TrajectoryCoefficients> {
    traj.validate()?;
    let dt = traj.dt();
    let t_g = traj.t_g;
    let pr: Vec<f64> = traj.psi_r.iter().map(|a| a.norm_sqr()).collect();
    let pw: Vec<f64> = traj.psi_w.iter().map(|a| a.norm_sqr()).collect();
    let n = pr.len();
    let rev = |y: &[f64], k: usize| y[n - 1 - k];
    let ratio = |num: f64, den: f64| if den > 0.0 { num / den } else { 0.0 };

    let alpha = trapezoid(&pr, dt) / t_g;
    let beta = trapezoid(&pw, dt) / t_g;
    let r_01_int: Vec<f64> = (0..n).map(|k| pr[k] * rev(&pr, k)).collect();
    let r_11p_int: Vec<f64> = (0..n).map(|k| pw[k] * rev(&pw, k)).collect();
    let r_11_int: Vec<f64> = (0..n).map(|k| pw[k] * rev(&pr, k)).collect();

    // After a radiative decay at t the partner restarts from |1>, so its
    // mean Rydberg population over the rest of the gate is the running
    // integral of |psi_r|^2 up to t_g - t.
    let mut cumulative = vec![0.0; n];
    for k in 1..n {
        cumulative[k] = cumulative[k - 1] + 0.5 * dt * (pr[k] + pr[k - 1]);
    }
    let bp_int: Vec<f64> = (0..n).map(|k| pw[k] * rev(&cumulative, k) / t_g).collect();

    let blockade = |v: f64| if v.is_infinite() { 0.0 } else { omega * omega / (2.0 * v * v) };
    Ok(TrajectoryCoefficients {
        alpha,
        r_01: ratio(trapezoid(&r_01_int, dt), t_g * alpha),
        beta,
        r_11: ratio(trapezoid(&r_11_int, dt), t_g * beta),
        r_11_prime: ratio(trapezoid(&r_11p_int, dt), t_g * beta),
        beta_prime: ratio(trapezoid(&bp_int, dt), t_g * beta),
        beta_double: beta * blockade(v_rr),
        s: blockade(v_rp),
    })
}

/// Time-averaged |psi_rr|^2, for comparison with the perturbative
/// `beta_double`.
pub fn mean_double_population(traj: &Trajectory) -> Result<f64> {
    traj.validate()?;
    let p: Vec<f64> = traj.psi_rr.iter().map(|a| a.norm_sqr()).collect();
    Ok(trapezoid(&p, traj.dt()) / traj.t_g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constant(n: usize, r: f64, w: f64) -> Trajectory {
        Trajectory {
            t_g: 2.0,
            psi_r: vec![Complex64::new(r.sqrt(), 0.0); n],
            psi_w: vec![Complex64::new(0.0, w.sqrt()); n],
            psi_rr: vec![Complex64::default(); n],
        }
    }

    #[test]
    fn zero_amplitude_gives_zero() {
        let c = trajectory_coefficients(&constant(11, 0.0, 0.0), 1.0, f64::INFINITY, f64::INFINITY).unwrap();
        assert_eq!(c, TrajectoryCoefficients { alpha: 0.0, r_01: 0.0, beta: 0.0, r_11: 0.0, r_11_prime: 0.0, beta_prime: 0.0, beta_double: 0.0, s: 0.0 });
    }

    #[test]
    fn constant_populations() {
        // With constant populations p_r, p_w: R_01 = p_r, R'_11 = p_w,
        // R_11 = p_r and beta' = p_r / 2.
        let c = trajectory_coefficients(&constant(2001, 0.3, 0.6), 2.0, 200.0, 100.0).unwrap();
        assert!((c.alpha - 0.3).abs() < 1e-12);
        assert!((c.beta - 0.6).abs() < 1e-12);
        assert!((c.r_01 - 0.3).abs() < 1e-12);
        assert!((c.r_11 - 0.3).abs() < 1e-12);
        assert!((c.r_11_prime - 0.6).abs() < 1e-12);
        assert!((c.beta_prime - 0.15).abs() < 1e-9);
        assert!((c.beta_double - 0.6 * 4.0 / (2.0 * 200.0 * 200.0)).abs() < 1e-15);
        assert!((c.s - 4.0 / 20000.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_input() {
        let mut t = constant(5, 0.5, 0.5);
        t.psi_r[2] = Complex64::new(1.1, 0.0);
        assert!(matches!(trajectory_coefficients(&t, 1.0, 1.0, 1.0), Err(Error::NonNormalized { index: 2, .. })));
        let mut t = constant(5, 0.5, 0.5);
        t.psi_w.pop();
        assert!(trajectory_coefficients(&t, 1.0, 1.0, 1.0).is_err());
    }
}
