//! Circuit-level noise: depolarizing Pauli errors and heralded erasures on
//! two-qubit gates, ancilla preparation/measurement flips, and the biased
//! (bias-preserving gate) channel used for comparison.

use crate::code_model::{GateKind, Schedule};
use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliPair};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Per-trial random stream. Trials are keyed by `(seed, trial index)`, so any
/// subset of trials can be regenerated independently and in any order.
pub type TrialRng = ChaCha8Rng;

pub fn trial_rng(seed: u64, trial: u64) -> TrialRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NoiseMode {
    /// Pauli errors with probability `p (1 - R_e)`, erasures with `p R_e`.
    Erasure,
    /// Bias-preserving gates with dephasing bias `eta` (may be infinite).
    Biased {
        #[serde(with = "eta_serde")]
        eta: f64,
    },
}

mod eta_serde {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(eta: &f64, s: S) -> Result<S::Ok, S::Error> {
        if eta.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(*eta)
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Str(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(x) => Ok(x),
            Repr::Str(s) => super::parse_eta(&s).map_err(serde::de::Error::custom),
        }
    }
}

/// Parse a bias value; accepts `inf`/`infinity`.
pub fn parse_eta(s: &str) -> std::result::Result<f64, String> {
    match s.trim().to_ascii_lowercase().as_str() {
        "inf" | "infinity" | "∞" => Ok(f64::INFINITY),
        other => other.parse::<f64>().map_err(|e| format!("invalid bias '{s}': {e}")),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseConfig {
    /// Total two-qubit gate error probability (per-Pauli base rate in biased mode).
    pub p: f64,
    pub erasure_fraction: f64,
    /// Ancilla preparation / measurement flip probability.
    pub p_m: f64,
    pub mode: NoiseMode,
    pub seed: u64,
}

impl NoiseConfig {
    pub fn erasure(p: f64, erasure_fraction: f64) -> Self {
        Self { p, erasure_fraction, p_m: 0.0, mode: NoiseMode::Erasure, seed: 0 }
    }

    pub fn biased(p: f64, eta: f64) -> Self {
        Self { p, erasure_fraction: 0.0, p_m: 0.0, mode: NoiseMode::Biased { eta }, seed: 0 }
    }

    pub fn with_spam(mut self, p_m: f64) -> Self {
        self.p_m = p_m;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_p(mut self, p: f64) -> Self {
        self.p = p;
        self
    }

    pub fn p_erasure(&self) -> f64 {
        match self.mode {
            NoiseMode::Erasure => self.p * self.erasure_fraction,
            NoiseMode::Biased { .. } => 0.0,
        }
    }

    pub fn p_pauli(&self) -> f64 {
        match self.mode {
            NoiseMode::Erasure => self.p * (1.0 - self.erasure_fraction),
            NoiseMode::Biased { .. } => self.p,
        }
    }

    pub fn eta(&self) -> Option<f64> {
        match self.mode {
            NoiseMode::Biased { eta } => Some(eta),
            NoiseMode::Erasure => None,
        }
    }

    /// Total two-qubit infidelity used when reporting thresholds: `p` in
    /// erasure mode, `2p` (the large-bias total of the dephasing terms) in
    /// biased mode.
    pub fn reported_error_rate(&self) -> f64 {
        match self.mode {
            NoiseMode::Erasure => self.p,
            NoiseMode::Biased { .. } => 2.0 * self.p,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidNoise(m.to_string()));
        if !(0.0..1.0).contains(&self.p) {
            return bad("p must satisfy 0 <= p < 1");
        }
        if !(0.0..=1.0).contains(&self.erasure_fraction) {
            return bad("erasure fraction must lie in [0, 1]");
        }
        if !(0.0..=1.0).contains(&self.p_m) {
            return bad("p_m must lie in [0, 1]");
        }
        if let NoiseMode::Biased { eta } = self.mode {
            if self.erasure_fraction > 0.0 {
                return Err(Error::BiasedWithErasure(self.erasure_fraction));
            }
            if !(eta >= 1.0) {
                return bad("bias eta must be >= 1");
            }
            for kind in [GateKind::Cnot, GateKind::Cz] {
                if GateChannel::biased(self.p, eta, kind).total() >= 1.0 {
                    return bad("biased channel probabilities exceed 1");
                }
            }
        }
        Ok(())
    }
}

/// Where a two-qubit gate sits in the circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GateLocation {
    pub round: u32,
    /// Index of the gate within its round (see [`Schedule::gates`]).
    pub gate: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GateErrorKind {
    None,
    Pauli(PauliPair),
    Erasure,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateErrorEvent {
    pub kind: GateErrorKind,
    pub location: GateLocation,
}

/// Discrete error channel of one gate: outcomes with their probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct GateChannel {
    outcomes: Vec<(GateErrorKind, f64)>,
    total: f64,
}

impl GateChannel {
    pub fn erasure(p: f64, erasure_fraction: f64) -> Self {
        let p_pauli = p * (1.0 - erasure_fraction) / 15.0;
        let mut outcomes = vec![(GateErrorKind::Erasure, p * erasure_fraction)];
        outcomes.extend(PauliPair::non_identity().map(|pp| (GateErrorKind::Pauli(pp), p_pauli)));
        Self::from_outcomes(outcomes)
    }

    /// Biased channel; `first` of each pair acts on the control.
    pub fn biased(p: f64, eta: f64, kind: GateKind) -> Self {
        let other = if eta.is_infinite() { 0.0 } else { p / eta };
        let zi = PauliPair::new(Pauli::Z, Pauli::I);
        let iz = PauliPair::new(Pauli::I, Pauli::Z);
        let zz = PauliPair::new(Pauli::Z, Pauli::Z);
        let outcomes = PauliPair::non_identity()
            .map(|pp| {
                let prob = match kind {
                    GateKind::Cnot if pp == zi => p,
                    GateKind::Cnot if pp == iz || pp == zz => p / 2.0,
                    GateKind::Cz if pp == zi || pp == iz => p,
                    _ => other,
                };
                (GateErrorKind::Pauli(pp), prob)
            })
            .collect();
        Self::from_outcomes(outcomes)
    }

    pub fn for_gate(cfg: &NoiseConfig, kind: GateKind) -> Self {
        match cfg.mode {
            NoiseMode::Erasure => Self::erasure(cfg.p, cfg.erasure_fraction),
            NoiseMode::Biased { eta } => Self::biased(cfg.p, eta, kind),
        }
    }

    fn from_outcomes(outcomes: Vec<(GateErrorKind, f64)>) -> Self {
        let outcomes: Vec<_> = outcomes.into_iter().filter(|(_, q)| *q > 0.0).collect();
        let total = outcomes.iter().map(|(_, q)| q).sum();
        Self { outcomes, total }
    }

    /// Probability that any error occurs.
    pub fn total(&self) -> f64 {
        self.total
    }

    pub fn probability(&self, kind: GateErrorKind) -> f64 {
        self.outcomes.iter().filter(|(k, _)| *k == kind).map(|(_, q)| q).sum()
    }

    pub fn outcomes(&self) -> &[(GateErrorKind, f64)] {
        &self.outcomes
    }

    /// Map a uniform draw in `[0, 1)` onto an outcome.
    #[inline]
    pub fn outcome_for(&self, u: f64) -> GateErrorKind {
        let mut acc = 0.0;
        for &(kind, q) in &self.outcomes {
            acc += q;
            if u < acc {
                return kind;
            }
        }
        GateErrorKind::None
    }

    /// Outcome conditioned on an error having occurred.
    #[inline]
    pub fn error_for(&self, u: f64) -> GateErrorKind {
        match self.outcome_for(u * self.total) {
            GateErrorKind::None => self.outcomes.last().map_or(GateErrorKind::None, |o| o.0),
            k => k,
        }
    }
}

/// Draw the error of one gate in erasure mode.
pub fn sample_gate_error<R: Rng + ?Sized>(
    cfg: &NoiseConfig,
    location: GateLocation,
    rng: &mut R,
) -> Result<GateErrorEvent> {
    if cfg.mode != NoiseMode::Erasure {
        return Err(Error::InvalidNoise("sample_gate_error requires erasure mode".into()));
    }
    let channel = GateChannel::erasure(cfg.p, cfg.erasure_fraction);
    Ok(GateErrorEvent { kind: channel.outcome_for(rng.gen()), location })
}

/// Draw the error of one gate in biased mode.
pub fn sample_biased_gate_error<R: Rng + ?Sized>(
    cfg: &NoiseConfig,
    kind: GateKind,
    location: GateLocation,
    rng: &mut R,
) -> Result<GateErrorEvent> {
    let NoiseMode::Biased { eta } = cfg.mode else {
        return Err(Error::InvalidNoise("sample_biased_gate_error requires biased mode".into()));
    };
    if cfg.erasure_fraction > 0.0 {
        return Err(Error::BiasedWithErasure(cfg.erasure_fraction));
    }
    let channel = GateChannel::biased(cfg.p, eta, kind);
    Ok(GateErrorEvent { kind: channel.outcome_for(rng.gen()), location })
}

#[inline]
pub fn sample_spam_error<R: Rng + ?Sized>(cfg: &NoiseConfig, rng: &mut R) -> bool {
    cfg.p_m >= 1.0 || (cfg.p_m > 0.0 && rng.gen::<f64>() < cfg.p_m)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErasureEntry {
    pub location: GateLocation,
    /// Paulis modelling the fresh maximally mixed atoms.
    pub replacement: PauliPair,
    /// The erased gate involved an ancilla, so this round's outcome for that
    /// ancilla is random.
    pub ancilla_outcome_random: bool,
    pub ancilla: u32,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErasureRecord {
    pub entries: Vec<ErasureEntry>,
}

impl ErasureRecord {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn locations(&self) -> impl Iterator<Item = GateLocation> + '_ {
        self.entries.iter().map(|e| e.location)
    }
}

/// Replace both atoms of an erased gate by maximally mixed ones: two
/// independent uniform Paulis, logged in `record`.
pub fn apply_erasure_replacement<R: Rng + ?Sized>(
    event: &GateErrorEvent,
    ancilla: u32,
    record: &mut ErasureRecord,
    rng: &mut R,
) -> Result<(Pauli, Pauli)> {
    if event.kind != GateErrorKind::Erasure {
        return Err(Error::InvalidNoise("erasure replacement on a non-erasure event".into()));
    }
    let first = Pauli::from_code(rng.gen_range(0..4));
    let second = Pauli::from_code(rng.gen_range(0..4));
    record.entries.push(ErasureEntry {
        location: event.location,
        replacement: PauliPair::new(first, second),
        ancilla_outcome_random: true,
        ancilla,
    });
    Ok((first, second))
}

/// One sampled fault on a gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateFault {
    /// `round * gates_per_round + gate`.
    pub slot: u32,
    pub pauli: PauliPair,
    pub erased: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpamKind {
    Preparation,
    Measurement,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpamFault {
    /// `round * num_ancillas + ancilla`.
    pub slot: u32,
    pub kind: SpamKind,
}

/// Every fault of one trial, ordered by circuit position.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TrialFaults {
    pub gates: Vec<GateFault>,
    pub spam: Vec<SpamFault>,
}

impl TrialFaults {
    pub fn clear(&mut self) {
        self.gates.clear();
        self.spam.clear();
    }
}

/// Samples the faults of whole trials. Gaps between faulty gates are drawn
/// geometrically, so the cost scales with the number of faults rather than
/// with the number of gates.
#[derive(Debug, Clone)]
pub struct FaultSampler {
    channels: [GateChannel; 2],
    /// Gate kind per slot within a round (0 = CZ, 1 = CNOT).
    kinds: Vec<u8>,
    gate_slots: u32,
    spam_slots: u32,
    p_gate_max: f64,
    p_m: f64,
}

impl FaultSampler {
    pub fn new(cfg: &NoiseConfig, schedule: &Schedule, rounds: usize, num_ancillas: usize) -> Self {
        let channels = [GateChannel::for_gate(cfg, GateKind::Cz), GateChannel::for_gate(cfg, GateKind::Cnot)];
        let kinds = schedule.gates.iter().map(|g| (g.kind == GateKind::Cnot) as u8).collect();
        let p_gate_max = channels[0].total().max(channels[1].total());
        Self {
            channels,
            kinds,
            gate_slots: (rounds * schedule.gates_per_round()) as u32,
            spam_slots: (rounds * num_ancillas) as u32,
            p_gate_max,
            p_m: cfg.p_m,
        }
    }

    pub fn channel(&self, kind: GateKind) -> &GateChannel {
        &self.channels[(kind == GateKind::Cnot) as usize]
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut TrialFaults) {
        out.clear();
        let per_round = self.kinds.len() as u32;
        let mut slot = 0u32;
        while let Some(next) = next_event(rng, self.p_gate_max, slot, self.gate_slots) {
            let channel = &self.channels[self.kinds[(next % per_round) as usize] as usize];
            // Thin to the gate's own total when the two gate kinds differ.
            let accept = channel.total() >= self.p_gate_max || rng.gen::<f64>() * self.p_gate_max < channel.total();
            if accept {
                match channel.error_for(rng.gen()) {
                    GateErrorKind::Pauli(pauli) => out.gates.push(GateFault { slot: next, pauli, erased: false }),
                    GateErrorKind::Erasure => {
                        let pauli = PauliPair::from_code(rng.gen_range(0..16));
                        out.gates.push(GateFault { slot: next, pauli, erased: true });
                    }
                    GateErrorKind::None => {}
                }
            }
            slot = next + 1;
        }
        for kind in [SpamKind::Preparation, SpamKind::Measurement] {
            let mut slot = 0u32;
            while let Some(next) = next_event(rng, self.p_m, slot, self.spam_slots) {
                out.spam.push(SpamFault { slot: next, kind });
                slot = next + 1;
            }
        }
        out.spam.sort_by_key(|f| (f.slot, f.kind == SpamKind::Measurement));
    }
}

/// Index of the next Bernoulli(`p`) success at or after `from`, below `end`.
#[inline]
fn next_event<R: Rng + ?Sized>(rng: &mut R, p: f64, from: u32, end: u32) -> Option<u32> {
    if from >= end || p <= 0.0 {
        return None;
    }
    if p >= 1.0 {
        return Some(from);
    }
    let u: f64 = rng.gen();
    // P(gap >= k) = (1 - p)^k
    let gap = ((1.0 - u).ln() / (1.0 - p).ln()).floor();
    let next = from as f64 + gap;
    (next < end as f64).then_some(next as u32)
}
