use super::stats::{wilson_interval, Z95};
use crate::code_model::{build_lattice, build_schedule_with_order, CodeConfig, GateOrder, Lattice, Schedule};
use crate::decoding_graph::{DecodingGraph, ErasureOverlay};
use crate::error::{Error, Result};
use crate::noise::{trial_rng, FaultSampler, NoiseConfig, TrialFaults};
use crate::pauli_sim::{Circuit, FaultTable, SyndromeTrial};
use crate::uf_decoder::{DecodeResult, Decoder};
use crate::parallel;
use serde::{Deserialize, Serialize, Serializer};

/// How many trials to run for one estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialPolicy {
    pub max_trials: u64,
    /// Stop once this many failures have been seen.
    pub target_failures: Option<u64>,
    pub batch_size: u64,
    /// Batches evaluated between stopping checks.
    pub batches_per_round: usize,
}

impl TrialPolicy {
    pub fn fixed(trials: u64) -> Self {
        Self { max_trials: trials, target_failures: None, batch_size: 1024, batches_per_round: 16 }
    }

    pub fn adaptive(target_failures: u64, max_trials: u64) -> Self {
        Self { target_failures: Some(target_failures), ..Self::fixed(max_trials) }
    }

    pub fn with_batch_size(mut self, batch_size: u64) -> Self {
        self.batch_size = batch_size.max(1);
        self
    }
}

fn serialize_eta<S: Serializer>(eta: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match eta {
        Some(x) if x.is_infinite() => s.serialize_str("inf"),
        Some(x) => s.serialize_f64(*x),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LogicalRateEstimate {
    pub d: usize,
    pub p: f64,
    pub r_e: f64,
    pub p_m: f64,
    #[serde(serialize_with = "serialize_eta")]
    pub eta: Option<f64>,
    pub trials: u64,
    pub failures: u64,
    pub p_l: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl LogicalRateEstimate {
    pub fn new(d: usize, cfg: &NoiseConfig, trials: u64, failures: u64) -> Self {
        let (ci_low, ci_high) = wilson_interval(failures, trials, Z95);
        Self {
            d,
            p: cfg.p,
            r_e: cfg.erasure_fraction,
            p_m: cfg.p_m,
            eta: cfg.eta(),
            trials,
            failures,
            p_l: if trials == 0 { 0.0 } else { failures as f64 / trials as f64 },
            ci_low,
            ci_high,
        }
    }

    /// Intervals overlap.
    pub fn consistent_with(&self, other: &Self) -> bool {
        self.ci_low <= other.ci_high && other.ci_low <= self.ci_high
    }
}

/// Everything needed to run memory trials at one `(d, noise)` point.
#[derive(Debug, Clone)]
pub struct MemoryExperiment {
    distance: usize,
    noise: NoiseConfig,
    lattice: Lattice,
    schedule: Schedule,
    table: FaultTable,
    sampler: FaultSampler,
    /// `None` when the circuit is noiseless.
    graph: Option<DecodingGraph>,
}

struct Worker<'a> {
    decoder: Option<Decoder<'a>>,
    faults: TrialFaults,
    scratch: Vec<u64>,
    defects: Vec<u32>,
    slots: Vec<u32>,
    overlay: ErasureOverlay,
}

impl MemoryExperiment {
    pub fn new(distance: usize, noise: NoiseConfig) -> Result<Self> {
        Self::with_order(distance, noise, GateOrder::default())
    }

    pub fn with_order(distance: usize, noise: NoiseConfig, order: GateOrder) -> Result<Self> {
        noise.validate()?;
        let code = CodeConfig::new(distance)?;
        let lattice = build_lattice(&code)?;
        let schedule = build_schedule_with_order(&lattice, order);
        let table = FaultTable::new(Circuit::new(&lattice, &schedule, code.rounds));
        let sampler = FaultSampler::new(&noise, &schedule, code.rounds, lattice.num_ancillas());
        let graph = if noise.p > 0.0 || noise.p_m > 0.0 {
            Some(DecodingGraph::from_table(&table, &schedule, &noise)?)
        } else {
            None
        };
        Ok(Self { distance, noise, lattice, schedule, table, sampler, graph })
    }

    pub fn distance(&self) -> usize {
        self.distance
    }

    pub fn noise(&self) -> &NoiseConfig {
        &self.noise
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn schedule(&self) -> &Schedule {
        &self.schedule
    }

    pub fn fault_table(&self) -> &FaultTable {
        &self.table
    }

    pub fn graph(&self) -> Option<&DecodingGraph> {
        self.graph.as_ref()
    }

    fn worker(&self) -> Worker<'_> {
        Worker {
            decoder: self.graph.as_ref().map(Decoder::new),
            faults: TrialFaults::default(),
            scratch: Vec::new(),
            defects: Vec::new(),
            slots: Vec::new(),
            overlay: ErasureOverlay::default(),
        }
    }

    fn trial_fails(&self, w: &mut Worker<'_>, trial: u64) -> Result<bool> {
        let Some(decoder) = w.decoder.as_mut() else {
            return Ok(false);
        };
        let mut rng = trial_rng(self.noise.seed, trial);
        self.sampler.sample(&mut rng, &mut w.faults);
        if w.faults.gates.is_empty() && w.faults.spam.is_empty() {
            return Ok(false);
        }
        let logical = self.table.sample_into(&w.faults, &mut w.scratch, &mut w.defects);
        let truth = logical[0] as u8 | (logical[1] as u8) << 1;
        w.slots.clear();
        w.slots.extend(w.faults.gates.iter().filter(|f| f.erased).map(|f| f.slot));
        let graph = self.graph.as_ref().expect("decoder implies graph");
        graph.overlay_slots_into(&w.slots, &mut w.overlay.edges)?;
        Ok(decoder.parity(&w.overlay, &w.defects)? != truth)
    }

    /// Failures among trials `start..end`, sequentially.
    pub fn count_failures(&self, start: u64, end: u64) -> Result<u64> {
        let mut w = self.worker();
        let mut failures = 0;
        for t in start..end {
            failures += self.trial_fails(&mut w, t)? as u64;
        }
        Ok(failures)
    }

    /// Run trials under `policy`. Batches are evaluated in parallel but
    /// combined in index order, so the result does not depend on the number
    /// of threads.
    pub fn run(&self, policy: &TrialPolicy) -> Result<LogicalRateEstimate> {
        self.run_with(policy, false)
    }

    /// Same as [`run`](Self::run) on the calling thread only.
    pub fn run_sequential(&self, policy: &TrialPolicy) -> Result<LogicalRateEstimate> {
        self.run_with(policy, true)
    }

    fn run_with(&self, policy: &TrialPolicy, sequential: bool) -> Result<LogicalRateEstimate> {
        if policy.max_trials == 0 {
            return Err(Error::InvalidRequest("at least one trial is required".into()));
        }
        let batch = policy.batch_size.max(1);
        let n_batches = policy.max_trials.div_ceil(batch);
        let per_round = policy.batches_per_round.max(1) as u64;
        let (mut trials, mut failures) = (0u64, 0u64);
        let mut next = 0u64;
        'outer: while next < n_batches {
            let count = per_round.min(n_batches - next) as usize;
            let first = next;
            let job = |w: &mut Worker<'_>, i: usize| -> Result<(u64, u64)> {
                let b = first + i as u64;
                let start = b * batch;
                let end = (start + batch).min(policy.max_trials);
                let mut f = 0;
                for t in start..end {
                    f += self.trial_fails(w, t)? as u64;
                }
                Ok((end - start, f))
            };
            let results = if sequential {
                parallel::map_init_sequential(count, || self.worker(), job)
            } else {
                parallel::map_init(count, || self.worker(), job)
            };
            for r in results {
                let (t, f) = r?;
                trials += t;
                failures += f;
                if policy.target_failures.is_some_and(|target| failures >= target) {
                    break 'outer;
                }
            }
            next += count as u64;
        }
        Ok(LogicalRateEstimate::new(self.distance, &self.noise, trials, failures))
    }

    /// Full record of one trial by explicit frame propagation, plus the
    /// decoder's output.
    pub fn inspect_trial(&self, trial: u64) -> Result<(SyndromeTrial, Option<DecodeResult>)> {
        let mut faults = TrialFaults::default();
        self.sampler.sample(&mut trial_rng(self.noise.seed, trial), &mut faults);
        let record = crate::pauli_sim::simulate_faults(self.table.circuit(), &faults);
        let decoded = match &self.graph {
            Some(g) => {
                let overlay = g.overlay_slots(&record.erased_slots)?;
                Some(Decoder::new(g).with_solid_edges(true).decode(&overlay, &record.defects)?)
            }
            None => None,
        };
        Ok((record, decoded))
    }
}

/// Logical error rate of a distance-`d` memory experiment.
pub fn estimate_logical_rate(cfg: &NoiseConfig, d: usize, policy: &TrialPolicy) -> Result<LogicalRateEstimate> {
    MemoryExperiment::new(d, *cfg)?.run(policy)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_noise_never_fails() {
        let est = estimate_logical_rate(&NoiseConfig::erasure(0.0, 0.5), 3, &TrialPolicy::fixed(500)).unwrap();
        assert_eq!((est.trials, est.failures, est.p_l), (500, 0, 0.0));
    }

    #[test]
    fn adaptive_stops_at_target() {
        let cfg = NoiseConfig::erasure(0.03, 0.0).with_seed(3);
        let policy = TrialPolicy::adaptive(20, 1_000_000).with_batch_size(64);
        let est = estimate_logical_rate(&cfg, 3, &policy).unwrap();
        assert!(est.failures >= 20);
        assert!(est.trials < 1_000_000);
        assert_eq!(est.trials % 64, 0);
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let cfg = NoiseConfig::erasure(0.02, 0.9).with_spam(0.005).with_seed(8);
        let exp = MemoryExperiment::new(3, cfg).unwrap();
        let policy = TrialPolicy::adaptive(30, 50_000).with_batch_size(100);
        assert_eq!(exp.run(&policy).unwrap(), exp.run_sequential(&policy).unwrap());
    }

    #[test]
    fn inspect_matches_hot_path() {
        let cfg = NoiseConfig::erasure(0.05, 0.7).with_spam(0.01).with_seed(1);
        let exp = MemoryExperiment::new(3, cfg).unwrap();
        for t in 0..300 {
            let (record, decoded) = exp.inspect_trial(t).unwrap();
            let decoded = decoded.unwrap();
            let fails = decoded.correction != record.logical;
            assert_eq!(fails, exp.count_failures(t, t + 1).unwrap() == 1);
        }
    }

    #[test]
    fn zero_trials_is_an_error() {
        let exp = MemoryExperiment::new(3, NoiseConfig::erasure(0.01, 0.0)).unwrap();
        assert!(exp.run(&TrialPolicy::fixed(0)).is_err());
    }
}
