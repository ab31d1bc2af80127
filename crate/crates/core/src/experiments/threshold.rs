use super::memory::{LogicalRateEstimate, MemoryExperiment, TrialPolicy};
use super::stats::{minimize_scalar, weighted_quadratic_fit};
use crate::code_model::GateOrder;
use crate::error::{Error, Result};
use crate::noise::NoiseConfig;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

/// How the ancilla flip probability follows the scanned gate error rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpamPolicy {
    Fixed(f64),
    /// `p_m = p` at every grid point.
    TiedToP,
}

impl SpamPolicy {
    pub fn at(self, p: f64) -> f64 {
        match self {
            SpamPolicy::Fixed(p_m) => p_m,
            SpamPolicy::TiedToP => p,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdRequest {
    /// Noise settings other than `p` (and `p_m` when tied).
    pub template: NoiseConfig,
    pub distances: [usize; 2],
    pub grid: Vec<f64>,
    pub policy: TrialPolicy,
    pub spam: SpamPolicy,
    pub bootstrap: usize,
    pub order: GateOrder,
}

impl ThresholdRequest {
    pub fn new(template: NoiseConfig, grid: Vec<f64>, policy: TrialPolicy) -> Self {
        Self {
            spam: SpamPolicy::Fixed(template.p_m),
            template,
            distances: [5, 7],
            grid,
            policy,
            bootstrap: 200,
            order: GateOrder::default(),
        }
    }

    pub fn with_distances(mut self, d1: usize, d2: usize) -> Self {
        self.distances = [d1, d2];
        self
    }

    pub fn with_spam(mut self, spam: SpamPolicy) -> Self {
        self.spam = spam;
        self
    }

    pub fn with_bootstrap(mut self, resamples: usize) -> Self {
        self.bootstrap = resamples;
        self
    }

    pub fn config_at(&self, p: f64) -> NoiseConfig {
        self.template.with_p(p).with_spam(self.spam.at(p))
    }
}

/// Quadratic finite-size-scaling fit `p_L = c0 + c1 x + c2 x^2` with
/// `x = (p - p_th) d^(1/nu)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalingFit {
    pub p_th: f64,
    pub nu: f64,
    pub coefficients: [f64; 3],
    pub chi2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdEstimate {
    /// Crossing in units of the scanned `p`.
    pub p_th: f64,
    /// Bootstrap standard deviation of `p_th`.
    pub uncertainty: f64,
    /// Crossing in total two-qubit infidelity units (differs from `p_th`
    /// only for biased noise).
    pub p_th_reported: f64,
    pub uncertainty_reported: f64,
    pub distances: [usize; 2],
    pub window: [f64; 2],
    pub fit: ScalingFit,
    pub points: Vec<LogicalRateEstimate>,
}

/// One `(d, p, trials, failures)` observation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observation {
    pub d: usize,
    pub p: f64,
    pub trials: u64,
    pub failures: u64,
}

impl From<&LogicalRateEstimate> for Observation {
    fn from(e: &LogicalRateEstimate) -> Self {
        Self { d: e.d, p: e.p, trials: e.trials, failures: e.failures }
    }
}

fn chi2_at(obs: &[Observation], p_th: f64, nu: f64) -> (f64, [f64; 3]) {
    let x: Vec<f64> = obs.iter().map(|o| (o.p - p_th) * (o.d as f64).powf(1.0 / nu)).collect();
    let y: Vec<f64> = obs.iter().map(|o| o.failures as f64 / o.trials as f64).collect();
    let w: Vec<f64> = obs
        .iter()
        .map(|o| {
            let n = o.trials as f64;
            // Floor the rate at half a failure so empty points keep a finite weight.
            let q = (o.failures as f64).max(0.5) / n;
            n / (q * (1.0 - q).max(0.5 / n))
        })
        .collect();
    match weighted_quadratic_fit(&x, &y, &w) {
        Some((c, chi2)) => (chi2, c),
        None => (f64::INFINITY, [0.0; 3]),
    }
}

/// Fit the crossing: minimise over `p_th` at `nu = 1`, refine `nu` once at
/// that crossing, then re-minimise `p_th`.
pub fn fit_crossing(obs: &[Observation]) -> Result<ScalingFit> {
    if obs.len() < 4 {
        return Err(Error::InsufficientStatistics(format!("{} points; the scaling fit needs at least 4", obs.len())));
    }
    let lo = obs.iter().map(|o| o.p).fold(f64::INFINITY, f64::min);
    let hi = obs.iter().map(|o| o.p).fold(f64::NEG_INFINITY, f64::max);
    let (p0, _) = minimize_scalar(|t| chi2_at(obs, t, 1.0).0, lo, hi, 41);
    let (nu, _) = minimize_scalar(|nu| chi2_at(obs, p0, nu).0, 0.4, 4.0, 37);
    let (p_th, _) = minimize_scalar(|t| chi2_at(obs, t, nu).0, lo, hi, 41);
    let (chi2, coefficients) = chi2_at(obs, p_th, nu);
    Ok(ScalingFit { p_th, nu, coefficients, chi2 })
}

/// Check that the larger distance goes from better to worse across the
/// window, i.e. that the two curves actually cross inside it.
pub fn check_crossing(obs: &[Observation], distances: [usize; 2]) -> Result<()> {
    let rate = |d: usize, p: f64| {
        obs.iter().find(|o| o.d == d && o.p == p).map(|o| o.failures as f64 / o.trials as f64)
    };
    let mut ps: Vec<f64> = obs.iter().map(|o| o.p).collect();
    ps.sort_by(f64::total_cmp);
    ps.dedup();
    let diffs: Vec<f64> = ps
        .iter()
        .filter_map(|&p| Some(rate(distances[1], p)? - rate(distances[0], p)?))
        .collect();
    match (diffs.first(), diffs.last()) {
        (Some(&a), Some(&b)) if a < 0.0 && b > 0.0 => Ok(()),
        (Some(&a), Some(&b)) => Err(Error::NoCrossing(format!(
            "p_L(d={}) - p_L(d={}) is {a:.3e} at p={} and {b:.3e} at p={}",
            distances[1],
            distances[0],
            ps[0],
            ps[ps.len() - 1]
        ))),
        _ => Err(Error::NoCrossing("no p value was simulated at both distances".into())),
    }
}

/// Parametric bootstrap: redraw every failure count from a binomial at its
/// observed rate and refit.
pub fn bootstrap_crossing(obs: &[Observation], resamples: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_b007);
    let mut out = Vec::with_capacity(resamples);
    let mut draw = obs.to_vec();
    for _ in 0..resamples {
        for (o, d) in obs.iter().zip(draw.iter_mut()) {
            let q = o.failures as f64 / o.trials as f64;
            d.failures = Binomial::new(o.trials, q).map_or(o.failures, |b| b.sample(&mut rng));
        }
        if let Ok(fit) = fit_crossing(&draw) {
            out.push(fit.p_th);
        }
    }
    out
}

fn std_dev(v: &[f64]) -> f64 {
    if v.len() < 2 {
        return 0.0;
    }
    let m = v.iter().sum::<f64>() / v.len() as f64;
    (v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (v.len() - 1) as f64).sqrt()
}

/// Threshold from already simulated points.
pub fn threshold_from_points(
    points: Vec<LogicalRateEstimate>,
    distances: [usize; 2],
    bootstrap: usize,
    seed: u64,
    reported_scale: f64,
) -> Result<ThresholdEstimate> {
    let obs: Vec<Observation> = points.iter().map(Observation::from).collect();
    check_crossing(&obs, distances)?;
    let fit = fit_crossing(&obs)?;
    let lo = obs.iter().map(|o| o.p).fold(f64::INFINITY, f64::min);
    let hi = obs.iter().map(|o| o.p).fold(f64::NEG_INFINITY, f64::max);
    if !(lo < fit.p_th && fit.p_th < hi) {
        return Err(Error::NoCrossing(format!("fitted crossing {} lies on the window edge [{lo}, {hi}]", fit.p_th)));
    }
    // Keep the uncertainty strictly positive even if every resample agrees.
    let floor = (hi - lo) * 1e-6;
    let uncertainty = std_dev(&bootstrap_crossing(&obs, bootstrap, seed)).max(floor);
    Ok(ThresholdEstimate {
        p_th: fit.p_th,
        uncertainty,
        p_th_reported: fit.p_th * reported_scale,
        uncertainty_reported: uncertainty * reported_scale,
        distances,
        window: [lo, hi],
        fit,
        points,
    })
}

/// Simulate both distances over the grid.
pub fn scan_points(req: &ThresholdRequest) -> Result<Vec<LogicalRateEstimate>> {
    if req.distances[0] == req.distances[1] {
        return Err(Error::InvalidRequest("threshold distances must differ".into()));
    }
    if req.grid.len() < 2 {
        return Err(Error::InvalidRequest("threshold grid needs at least two points".into()));
    }
    let mut points = Vec::with_capacity(2 * req.grid.len());
    for &p in &req.grid {
        for &d in &req.distances {
            let exp = MemoryExperiment::with_order(d, req.config_at(p), req.order)?;
            let est = exp.run(&req.policy)?;
            log::info!("d={d} p={p} p_L={:.4e} ({} / {})", est.p_l, est.failures, est.trials);
            points.push(est);
        }
    }
    Ok(points)
}

pub fn estimate_threshold(req: &ThresholdRequest) -> Result<ThresholdEstimate> {
    let points = scan_points(req)?;
    let scale = req.template.with_p(1.0).reported_error_rate();
    threshold_from_points(points, req.distances, req.bootstrap, req.template.seed, scale)
}

/// Logical rate of the smaller code above which the coarse scan stops.
const SATURATED: f64 = 0.3;

/// Coarse scan on a geometric grid over `range` to find where the larger
/// distance stops winning; returns a fine grid of `points` values spanning
/// `rel_width` either side of that point. The last sign change is used, since
/// sparse statistics at small `p` can flip the sign spuriously.
pub fn bracket_grid(
    template: &ThresholdRequest,
    range: [f64; 2],
    coarse_trials: u64,
    points: usize,
    rel_width: f64,
) -> Result<Vec<f64>> {
    if !(range[0] > 0.0 && range[1] > range[0]) || points < 2 {
        return Err(Error::InvalidRequest(format!("bad bracket range {range:?} or point count {points}")));
    }
    const COARSE: usize = 12;
    let ratio = (range[1] / range[0]).powf(1.0 / (COARSE - 1) as f64);
    let mut scan = Vec::with_capacity(COARSE);
    for i in 0..COARSE {
        let p = range[0] * ratio.powi(i as i32);
        let mut rates = [0.0; 2];
        for (k, &d) in template.distances.iter().enumerate() {
            let exp = MemoryExperiment::with_order(d, template.config_at(p), template.order)?;
            rates[k] = exp.run(&TrialPolicy::fixed(coarse_trials))?.p_l;
        }
        // Both curves flatten out far above threshold, where the sign of
        // their difference is noise.
        if rates[0] >= SATURATED {
            break;
        }
        scan.push((p, rates[1] - rates[0]));
    }
    let no_crossing = || {
        Error::NoCrossing(format!(
            "no sign change of p_L(d={}) - p_L(d={}) in {range:?}",
            template.distances[1], template.distances[0]
        ))
    };
    let last_below = scan.iter().rposition(|&(_, diff)| diff <= 0.0).ok_or_else(no_crossing)?;
    let (&(q, dq), &(p, dp)) = (scan.get(last_below).ok_or_else(no_crossing)?, scan.get(last_below + 1).ok_or_else(no_crossing)?);
    let centre = q + (p - q) * (-dq) / (dp - dq);
    let lo = centre * (1.0 - rel_width);
    let hi = centre * (1.0 + rel_width);
    Ok((0..points).map(|j| lo + (hi - lo) * j as f64 / (points - 1) as f64).collect())
}
