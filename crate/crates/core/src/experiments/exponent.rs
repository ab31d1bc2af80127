use super::memory::{LogicalRateEstimate, MemoryExperiment, TrialPolicy};
use super::stats::weighted_line_fit;
use crate::error::{Error, Result};
use crate::noise::NoiseConfig;
use serde::Serialize;

/// Slope of `log p_L` against `log p` below threshold.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExponentFit {
    pub nu: f64,
    pub stderr: f64,
    pub prefactor: f64,
    pub r_e: f64,
    pub d: usize,
    /// Fit range as fractions of `p_th`.
    pub window: [f64; 2],
    pub p_th: f64,
    pub points: Vec<LogicalRateEstimate>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExponentRequest {
    pub template: NoiseConfig,
    pub d: usize,
    /// Threshold used to place the window.
    pub p_th: f64,
    /// Sample points as fractions of `p_th`.
    pub ratios: Vec<f64>,
    pub policy: TrialPolicy,
}

impl ExponentRequest {
    /// Evenly spaced ratios across `[lo, hi]`.
    pub fn new(template: NoiseConfig, d: usize, p_th: f64, window: [f64; 2], points: usize, policy: TrialPolicy) -> Self {
        let n = points.max(2);
        let ratios = (0..n).map(|i| window[0] + (window[1] - window[0]) * i as f64 / (n - 1) as f64).collect();
        Self { template, d, p_th, ratios, policy }
    }
}

/// Weighted log-log fit. Each point's weight is its failure count, the
/// inverse relative variance of a rare-event rate.
pub fn fit_points(points: Vec<LogicalRateEstimate>, p_th: f64) -> Result<ExponentFit> {
    if points.len() < 4 {
        return Err(Error::InsufficientStatistics(format!("{} points; the exponent fit needs at least 4", points.len())));
    }
    if let Some(empty) = points.iter().find(|e| e.failures == 0) {
        return Err(Error::InsufficientStatistics(format!("no failures at p={} after {} trials", empty.p, empty.trials)));
    }
    let x: Vec<f64> = points.iter().map(|e| e.p.ln()).collect();
    let y: Vec<f64> = points.iter().map(|e| e.p_l.ln()).collect();
    let w: Vec<f64> = points.iter().map(|e| e.failures as f64 * (1.0 - e.p_l)).collect();
    let fit = weighted_line_fit(&x, &y, &w)
        .ok_or_else(|| Error::InsufficientStatistics("degenerate exponent fit".into()))?;
    let lo = points.iter().map(|e| e.p).fold(f64::INFINITY, f64::min);
    let hi = points.iter().map(|e| e.p).fold(f64::NEG_INFINITY, f64::max);
    Ok(ExponentFit {
        nu: fit.slope,
        stderr: fit.slope_stderr,
        prefactor: fit.intercept.exp(),
        r_e: points[0].r_e,
        d: points[0].d,
        window: [lo / p_th, hi / p_th],
        p_th,
        points,
    })
}

pub fn fit_exponent(req: &ExponentRequest) -> Result<ExponentFit> {
    if !(req.p_th > 0.0) {
        return Err(Error::InvalidRequest("threshold must be positive".into()));
    }
    if let Some(r) = req.ratios.iter().find(|&&r| !(r > 0.0 && r < 1.0)) {
        return Err(Error::InvalidRequest(format!("ratio {r} is not below threshold")));
    }
    let mut points = Vec::with_capacity(req.ratios.len());
    for &r in &req.ratios {
        let exp = MemoryExperiment::new(req.d, req.template.with_p(r * req.p_th))?;
        points.push(exp.run(&req.policy)?);
    }
    fit_points(points, req.p_th)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point(p: f64, trials: u64, failures: u64) -> LogicalRateEstimate {
        LogicalRateEstimate::new(5, &NoiseConfig::erasure(p, 0.5), trials, failures)
    }

    #[test]
    fn exact_power_law() {
        let pts = [0.001, 0.002, 0.003, 0.004]
            .iter()
            .map(|&p| point(p, 1_000_000_000, (1e9 * 50.0 * p * p * p).round() as u64))
            .collect();
        let fit = fit_points(pts, 0.01).unwrap();
        assert!((fit.nu - 3.0).abs() < 1e-3, "{}", fit.nu);
        assert!((fit.prefactor - 50.0).abs() < 0.5);
        assert_eq!(fit.window, [0.1, 0.4]);
    }

    #[test]
    fn empty_point_is_rejected() {
        let pts = vec![point(0.001, 100, 0), point(0.002, 100, 3), point(0.003, 100, 5), point(0.004, 100, 9)];
        assert!(matches!(fit_points(pts, 0.01), Err(Error::InsufficientStatistics(_))));
        assert!(fit_points(vec![point(0.001, 10, 1); 3], 0.01).is_err());
    }

    #[test]
    fn ratios_span_window() {
        let req = ExponentRequest::new(NoiseConfig::erasure(0.0, 1.0), 5, 0.05, [0.2, 0.6], 5, TrialPolicy::fixed(1));
        let expect = [0.2, 0.3, 0.4, 0.5, 0.6];
        assert!(req.ratios.iter().zip(expect).all(|(a, b)| (a - b).abs() < 1e-12));
    }
}
