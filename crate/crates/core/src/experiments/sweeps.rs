//! Threshold sweeps over erasure fraction, noise bias and SPAM rate.

use super::memory::{LogicalRateEstimate, TrialPolicy};
use super::threshold::{bracket_grid, scan_points, threshold_from_points, SpamPolicy, ThresholdEstimate, ThresholdRequest};
use crate::code_model::GateOrder;
use crate::error::{Error, Result};
use crate::noise::NoiseConfig;
use serde::{Deserialize, Serialize};

/// Shared settings for every threshold in a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSettings {
    pub distances: [usize; 2],
    pub policy: TrialPolicy,
    pub bootstrap: usize,
    /// Fine grid size around the bracketed crossing.
    pub grid_points: usize,
    /// Half-width of the fine grid relative to the bracketed crossing.
    pub rel_width: f64,
    pub coarse_trials: u64,
    /// Range searched for the crossing.
    pub search: [f64; 2],
    pub seed: u64,
    pub order: GateOrder,
}

impl Default for SweepSettings {
    fn default() -> Self {
        Self {
            distances: [5, 7],
            policy: TrialPolicy::fixed(80_000),
            bootstrap: 200,
            grid_points: 6,
            rel_width: 0.1,
            coarse_trials: 4_000,
            search: [0.002, 0.1],
            seed: 0,
            order: GateOrder::default(),
        }
    }
}

/// Times the fine grid may be moved when it misses the crossing.
const MAX_SHIFTS: usize = 3;

/// Differences `p_L(d2) - p_L(d1)` in increasing `p`.
fn differences(points: &[LogicalRateEstimate], distances: [usize; 2]) -> Vec<(f64, f64)> {
    let mut ps: Vec<f64> = points.iter().map(|e| e.p).collect();
    ps.sort_by(f64::total_cmp);
    ps.dedup();
    let rate = |d: usize, p: f64| points.iter().find(|e| e.d == d && e.p == p).map_or(0.0, |e| e.p_l);
    ps.into_iter().map(|p| (p, rate(distances[1], p) - rate(distances[0], p))).collect()
}

/// Where the fine grid should move: one grid width down or up when the
/// crossing lies outside it, otherwise onto the interpolated sign change.
fn recentre(points: &[LogicalRateEstimate], distances: [usize; 2], grid: &[f64]) -> Option<f64> {
    let diffs = differences(points, distances);
    let (first, last) = (diffs.first()?, diffs.last()?);
    let width = last.0 - first.0;
    if last.1 <= 0.0 {
        return Some(width);
    }
    if first.1 >= 0.0 {
        return Some(-width);
    }
    let i = diffs.iter().rposition(|&(_, d)| d <= 0.0)?;
    let ((q, dq), (p, dp)) = (diffs[i], *diffs.get(i + 1)?);
    let centre = q + (p - q) * (-dq) / (dp - dq);
    Some(centre - 0.5 * (grid[0] + grid[grid.len() - 1]))
}

/// Threshold with the scan grid placed automatically around the crossing.
/// The coarse bracket is noisy, so a fine grid that misses the crossing is
/// moved towards it and rescanned.
pub fn threshold_auto(template: NoiseConfig, spam: SpamPolicy, s: &SweepSettings) -> Result<ThresholdEstimate> {
    let mut req = ThresholdRequest::new(template.with_seed(s.seed), vec![], s.policy)
        .with_distances(s.distances[0], s.distances[1])
        .with_spam(spam)
        .with_bootstrap(s.bootstrap);
    req.order = s.order;
    req.grid = bracket_grid(&req, s.search, s.coarse_trials, s.grid_points, s.rel_width)?;
    let scale = req.template.with_p(1.0).reported_error_rate();
    let mut shifts = 0;
    loop {
        let points = scan_points(&req)?;
        let step = recentre(&points, req.distances, &req.grid);
        let result = threshold_from_points(points, req.distances, req.bootstrap, req.template.seed, scale);
        let step = match (&result, step) {
            (Err(Error::NoCrossing(_)), Some(step)) if shifts < MAX_SHIFTS && req.grid[0] + step > 0.0 => step,
            _ => return result,
        };
        log::info!("fine grid missed the crossing; moving it by {step:.3e}");
        req.grid.iter_mut().for_each(|p| *p += step);
        shifts += 1;
    }
}

/// Thresholds across erasure fractions.
pub fn erasure_sweep(fractions: &[f64], p_m: f64, s: &SweepSettings) -> Vec<(f64, Result<ThresholdEstimate>)> {
    fractions
        .iter()
        .map(|&r| (r, threshold_auto(NoiseConfig::erasure(0.0, r), SpamPolicy::Fixed(p_m), s)))
        .collect()
}

/// Threshold under biased Pauli noise; reported in `2p` units.
pub fn run_biased_comparison(eta: f64, s: &SweepSettings) -> Result<ThresholdEstimate> {
    if !(eta >= 1.0) {
        return Err(Error::InvalidNoise(format!("bias must be at least 1, got {eta}")));
    }
    threshold_auto(NoiseConfig::biased(0.0, eta), SpamPolicy::Fixed(0.0), s)
}

/// Thresholds at a fixed erasure fraction for several SPAM settings.
pub fn run_spam_sweep(erasure_fraction: f64, spam: &[SpamPolicy], s: &SweepSettings) -> Vec<(SpamPolicy, Result<ThresholdEstimate>)> {
    spam.iter()
        .map(|&sp| (sp, threshold_auto(NoiseConfig::erasure(0.0, erasure_fraction), sp, s)))
        .collect()
}

/// Whether a sequence of thresholds is non-decreasing up to overlap of
/// `z`-sigma intervals.
pub fn non_decreasing_within(estimates: &[&ThresholdEstimate], z: f64) -> bool {
    estimates.windows(2).all(|w| w[1].p_th + z * w[1].uncertainty >= w[0].p_th - z * w[0].uncertainty)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> SweepSettings {
        SweepSettings {
            distances: [3, 5],
            policy: TrialPolicy::fixed(20_000),
            bootstrap: 10,
            grid_points: 5,
            coarse_trials: 4000,
            seed: 4,
            ..SweepSettings::default()
        }
    }

    #[test]
    fn more_erasure_raises_threshold() {
        let out = erasure_sweep(&[0.0, 1.0], 0.0, &quick());
        let (a, b) = (out[0].1.as_ref().unwrap(), out[1].1.as_ref().unwrap());
        assert!(b.p_th > 2.0 * a.p_th, "{} {}", a.p_th, b.p_th);
        assert!(non_decreasing_within(&[a, b], 2.0));
        assert!(!non_decreasing_within(&[b, a], 2.0));
    }

    #[test]
    fn side_points_towards_the_crossing() {
        let pts = |f5: [u64; 2], f7: [u64; 2]| {
            let mut v = vec![];
            for (k, p) in [0.01, 0.02].into_iter().enumerate() {
                let cfg = NoiseConfig::erasure(p, 0.5);
                v.push(LogicalRateEstimate::new(5, &cfg, 1000, f5[k]));
                v.push(LogicalRateEstimate::new(7, &cfg, 1000, f7[k]));
            }
            v
        };
        let grid = [0.01, 0.02];
        assert_eq!(recentre(&pts([10, 50], [5, 30]), [5, 7], &grid), Some(0.01));
        assert_eq!(recentre(&pts([10, 50], [20, 90]), [5, 7], &grid), Some(-0.01));
        // Sign change at 1/9 of the way from 0.01 to 0.02.
        let step = recentre(&pts([10, 50], [5, 90]), [5, 7], &grid).unwrap();
        assert!((step - (0.01 + 0.01 / 9.0 - 0.015)).abs() < 1e-12, "{step}");
    }

    #[test]
    fn biased_reports_twice_p() {
        let est = run_biased_comparison(f64::INFINITY, &quick()).unwrap();
        assert!((est.p_th_reported - 2.0 * est.p_th).abs() < 1e-15);
        assert!(run_biased_comparison(0.5, &quick()).is_err());
    }
}
