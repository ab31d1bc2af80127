//! Pauli-frame simulation of the noisy syndrome-extraction circuit.
//!
//! A trial runs `rounds` noisy rounds followed by one perfect round. Raw
//! outcomes are differenced in time to give `rounds + 1` detector layers;
//! detector `layer * num_ancillas + ancilla` fires when the check outcome
//! changed between consecutive rounds.
//!
//! Because the frame is linear, the effect of any fault is the XOR of the
//! effects of its `X`/`Z` components. [`FaultTable`] precomputes those effects
//! once per circuit so Monte Carlo trials skip the gate-by-gate propagation.

use crate::code_model::{GateKind, Lattice, Schedule};
use crate::error::Result;
use crate::noise::{
    ErasureEntry, ErasureRecord, FaultSampler, GateLocation, NoiseConfig, SpamKind, TrialFaults, TrialRng,
};
use crate::pauli::{Pauli, PauliPair};
use serde::Serialize;

/// X/Z flips on every qubit (data qubits first, then ancillas).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliFrame {
    bits: Vec<u8>,
}

impl PauliFrame {
    pub fn new(num_qubits: usize) -> Self {
        Self { bits: vec![0; num_qubits] }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    #[inline]
    pub fn get(&self, q: usize) -> Pauli {
        Pauli::from_code(self.bits[q])
    }

    #[inline]
    pub fn set(&mut self, q: usize, p: Pauli) {
        self.bits[q] = p.code();
    }

    /// Multiply `p` into qubit `q` (phases ignored).
    #[inline]
    pub fn apply(&mut self, q: usize, p: Pauli) {
        self.bits[q] ^= p.code();
    }

    pub fn compose(&mut self, other: &PauliFrame) {
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a ^= b;
        }
    }

    pub fn clear(&mut self) {
        self.bits.fill(0);
    }

    pub fn is_identity(&self) -> bool {
        self.bits.iter().all(|&b| b == 0)
    }
}

/// Conjugate the frame through a gate; `control` is the ancilla for both
/// gate kinds.
#[inline]
pub fn propagate(frame: &mut PauliFrame, kind: GateKind, control: usize, target: usize) {
    debug_assert_ne!(control, target);
    let c = frame.bits[control];
    let t = frame.bits[target];
    match kind {
        GateKind::Cnot => {
            // X_c -> X_c X_t, Z_t -> Z_c Z_t
            frame.bits[target] = t ^ (c & 1);
            frame.bits[control] = c ^ (t & 2);
        }
        GateKind::Cz => {
            // X_c -> X_c Z_t, X_t -> Z_c X_t
            frame.bits[target] = t ^ ((c & 1) << 1);
            frame.bits[control] = c ^ ((t & 1) << 1);
        }
    }
}

/// Result of one simulated memory experiment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SyndromeTrial {
    /// Fired detectors, ascending.
    pub defects: Vec<u32>,
    pub erasures: ErasureRecord,
    /// Gate slots (`round * gates_per_round + gate`) of the erasures, ascending.
    pub erased_slots: Vec<u32>,
    /// Residual data error anticommutes with `logicals[c]`.
    pub logical: [bool; 2],
    #[serde(skip)]
    num_ancillas: usize,
    #[serde(skip)]
    layers: usize,
}

impl SyndromeTrial {
    pub fn num_detectors(&self) -> usize {
        self.num_ancillas * self.layers
    }

    /// Detector values as `layers × ancillas`.
    pub fn detector_matrix(&self) -> Vec<Vec<bool>> {
        let mut m = vec![vec![false; self.num_ancillas]; self.layers];
        for &d in &self.defects {
            let d = d as usize;
            m[d / self.num_ancillas][d % self.num_ancillas] = true;
        }
        m
    }

    /// One line of the line-delimited JSON debug dump.
    pub fn debug_line(&self, trial: u64) -> String {
        serde_json::json!({
            "trial": trial,
            "defects": self.defects,
            "erased_slots": self.erased_slots,
            "logical": self.logical,
        })
        .to_string()
    }
}

#[derive(Debug, Clone, Copy)]
struct FlatGate {
    control: u32,
    target: u32,
    kind: GateKind,
}

/// Flattened circuit for frame propagation.
#[derive(Debug, Clone)]
pub struct Circuit {
    num_data: usize,
    num_ancillas: usize,
    rounds: usize,
    gates: Vec<FlatGate>,
    ancilla_class: Vec<u8>,
    logicals: [Vec<(u32, Pauli)>; 2],
}

impl Circuit {
    pub fn new(lattice: &Lattice, schedule: &Schedule, rounds: usize) -> Self {
        let gates = schedule
            .gates
            .iter()
            .map(|g| FlatGate { control: lattice.ancilla_qubit(g.ancilla) as u32, target: g.data as u32, kind: g.kind })
            .collect();
        let logicals = [0, 1].map(|c| lattice.logicals[c].support().map(|(q, p)| (q as u32, p)).collect());
        Self {
            num_data: lattice.num_data(),
            num_ancillas: lattice.num_ancillas(),
            rounds,
            gates,
            ancilla_class: lattice.stabilizers.iter().map(|s| s.class).collect(),
            logicals,
        }
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    pub fn num_ancillas(&self) -> usize {
        self.num_ancillas
    }

    pub fn gates_per_round(&self) -> usize {
        self.gates.len()
    }

    /// Noisy gate slots over all rounds.
    pub fn num_gate_slots(&self) -> usize {
        self.rounds * self.gates.len()
    }

    /// Detector layers (`rounds + 1`).
    pub fn layers(&self) -> usize {
        self.rounds + 1
    }

    pub fn num_detectors(&self) -> usize {
        self.layers() * self.num_ancillas
    }

    pub fn detector_class(&self, det: usize) -> u8 {
        self.ancilla_class[det % self.num_ancillas]
    }

    /// `(layer, ancilla)` of a detector.
    pub fn detector_coords(&self, det: usize) -> (usize, usize) {
        (det / self.num_ancillas, det % self.num_ancillas)
    }

    pub fn location(&self, slot: u32) -> GateLocation {
        let g = self.gates.len() as u32;
        GateLocation { round: slot / g, gate: slot % g }
    }

    pub fn slot(&self, loc: GateLocation) -> Option<u32> {
        ((loc.round as usize) < self.rounds && (loc.gate as usize) < self.gates.len())
            .then(|| loc.round * self.gates.len() as u32 + loc.gate)
    }

    /// Ancilla index acted on by the gate in `slot`.
    pub fn slot_ancilla(&self, slot: u32) -> u32 {
        self.gates[slot as usize % self.gates.len()].control - self.num_data as u32
    }

    /// Propagate `faults` through the whole circuit; returns the fired
    /// detectors (ascending) and the logical flips.
    pub fn simulate(&self, faults: &TrialFaults) -> (Vec<u32>, [bool; 2]) {
        let mut frame = PauliFrame::new(self.num_data + self.num_ancillas);
        let mut previous = vec![false; self.num_ancillas];
        let mut defects = Vec::new();
        let per_round = self.gates.len() as u32;
        let mut gate_faults = faults.gates.iter().peekable();
        let mut spam = faults.spam.iter().peekable();
        for round in 0..=self.rounds as u32 {
            for a in 0..self.num_ancillas {
                frame.bits[self.num_data + a] = 0;
            }
            let spam_base = round * self.num_ancillas as u32;
            let mut flips = vec![false; self.num_ancillas];
            while let Some(f) = spam.next_if(|f| f.slot < spam_base + self.num_ancillas as u32) {
                let a = (f.slot - spam_base) as usize;
                match f.kind {
                    SpamKind::Preparation => frame.apply(self.num_data + a, Pauli::Z),
                    SpamKind::Measurement => flips[a] ^= true,
                }
            }
            for (k, gate) in self.gates.iter().enumerate() {
                propagate(&mut frame, gate.kind, gate.control as usize, gate.target as usize);
                let slot = round * per_round + k as u32;
                while let Some(f) = gate_faults.next_if(|f| f.slot == slot) {
                    frame.apply(gate.control as usize, f.pauli.first);
                    frame.apply(gate.target as usize, f.pauli.second);
                }
            }
            for a in 0..self.num_ancillas {
                let outcome = frame.get(self.num_data + a).has_z() ^ flips[a];
                if outcome != previous[a] {
                    defects.push(spam_base + a as u32);
                }
                previous[a] = outcome;
            }
        }
        let logical = [0, 1].map(|c| {
            self.logicals[c].iter().fold(false, |acc, &(q, p)| acc ^ frame.get(q as usize).anticommutes(p))
        });
        (defects, logical)
    }
}

/// Sample and simulate one trial by explicit frame propagation.
pub fn run_trial(lattice: &Lattice, schedule: &Schedule, cfg: &NoiseConfig, rng: &mut TrialRng) -> Result<SyndromeTrial> {
    cfg.validate()?;
    let rounds = lattice.distance;
    let circuit = Circuit::new(lattice, schedule, rounds);
    let sampler = FaultSampler::new(cfg, schedule, rounds, lattice.num_ancillas());
    let mut faults = TrialFaults::default();
    sampler.sample(rng, &mut faults);
    Ok(simulate_faults(&circuit, &faults))
}

/// Frame-propagate an explicit fault list.
pub fn simulate_faults(circuit: &Circuit, faults: &TrialFaults) -> SyndromeTrial {
    let (defects, logical) = circuit.simulate(faults);
    let (erasures, erased_slots) = erasure_record(circuit, faults);
    SyndromeTrial { defects, erasures, erased_slots, logical, num_ancillas: circuit.num_ancillas, layers: circuit.layers() }
}

fn erasure_record(circuit: &Circuit, faults: &TrialFaults) -> (ErasureRecord, Vec<u32>) {
    let erased: Vec<_> = faults.gates.iter().filter(|f| f.erased).collect();
    let entries = erased
        .iter()
        .map(|f| ErasureEntry {
            location: circuit.location(f.slot),
            replacement: f.pauli,
            ancilla_outcome_random: true,
            ancilla: circuit.slot_ancilla(f.slot),
        })
        .collect();
    (ErasureRecord { entries }, erased.iter().map(|f| f.slot).collect())
}

/// Detector/logical effect of every single fault of the circuit.
#[derive(Debug, Clone)]
pub struct FaultTable {
    circuit: Circuit,
    /// `offsets[s * 16 + code]..offsets[s * 16 + code + 1]` indexes `dets`.
    offsets: Vec<u32>,
    dets: Vec<u32>,
    logical: Vec<u8>,
}

impl FaultTable {
    pub fn new(circuit: Circuit) -> Self {
        let slots = circuit.num_gate_slots();
        let mut offsets = Vec::with_capacity(slots * 16 + 1);
        let mut dets = Vec::new();
        let mut logical = Vec::with_capacity(slots * 16);
        offsets.push(0);
        let mut faults = TrialFaults::default();
        let basis = [Pauli::X, Pauli::Z].map(|p| [PauliPair::new(p, Pauli::I), PauliPair::new(Pauli::I, p)]);
        let basis = [basis[0][0], basis[1][0], basis[0][1], basis[1][1]];
        for slot in 0..slots as u32 {
            let effects: Vec<(Vec<u32>, u8)> = basis
                .iter()
                .map(|&pauli| {
                    faults.clear();
                    faults.gates.push(crate::noise::GateFault { slot, pauli, erased: false });
                    let (d, l) = circuit.simulate(&faults);
                    (d, l[0] as u8 | (l[1] as u8) << 1)
                })
                .collect();
            for code in 0u8..16 {
                // code bits: x1 | z1 << 1 | x2 << 2 | z2 << 3 matches `basis` order
                let mut acc: Vec<u32> = Vec::new();
                let mut mask = 0u8;
                for (b, (d, l)) in effects.iter().enumerate() {
                    if code >> b & 1 == 1 {
                        acc = symmetric_difference(&acc, d);
                        mask ^= l;
                    }
                }
                dets.extend_from_slice(&acc);
                offsets.push(dets.len() as u32);
                logical.push(mask);
            }
        }
        Self { circuit, offsets, dets, logical }
    }

    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    /// Detectors flipped and logical mask (bit `c` for `logicals[c]`) of
    /// Pauli `pauli` after the gate in `slot`.
    #[inline]
    pub fn gate_effect(&self, slot: u32, pauli: PauliPair) -> (&[u32], u8) {
        let i = slot as usize * 16 + pauli.code() as usize;
        (&self.dets[self.offsets[i] as usize..self.offsets[i + 1] as usize], self.logical[i])
    }

    /// Detectors flipped by a preparation or measurement fault in spam slot
    /// `round * num_ancillas + ancilla`.
    #[inline]
    pub fn spam_effect(&self, slot: u32) -> [u32; 2] {
        [slot, slot + self.circuit.num_ancillas as u32]
    }

    /// Apply a trial's faults using the table; bit-identical to
    /// [`Circuit::simulate`] on the same faults.
    pub fn sample_into(&self, faults: &TrialFaults, scratch: &mut Vec<u64>, defects: &mut Vec<u32>) -> [bool; 2] {
        let n = self.circuit.num_detectors();
        scratch.clear();
        scratch.resize(n.div_ceil(64), 0);
        let mut mask = 0u8;
        for f in &faults.gates {
            let (dets, l) = self.gate_effect(f.slot, f.pauli);
            for &d in dets {
                scratch[d as usize >> 6] ^= 1 << (d & 63);
            }
            mask ^= l;
        }
        for f in &faults.spam {
            for d in self.spam_effect(f.slot) {
                scratch[d as usize >> 6] ^= 1 << (d & 63);
            }
        }
        defects.clear();
        for (w, &word) in scratch.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                defects.push((w * 64) as u32 + bits.trailing_zeros());
                bits &= bits - 1;
            }
        }
        [mask & 1 != 0, mask & 2 != 0]
    }

    /// Table-driven counterpart of [`simulate_faults`].
    pub fn trial(&self, faults: &TrialFaults) -> SyndromeTrial {
        let mut scratch = Vec::new();
        let mut defects = Vec::new();
        let logical = self.sample_into(faults, &mut scratch, &mut defects);
        let (erasures, erased_slots) = erasure_record(&self.circuit, faults);
        SyndromeTrial {
            defects,
            erasures,
            erased_slots,
            logical,
            num_ancillas: self.circuit.num_ancillas,
            layers: self.circuit.layers(),
        }
    }
}

fn symmetric_difference(a: &[u32], b: &[u32]) -> Vec<u32> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::with_capacity(a.len() + b.len());
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) if x == y => {
                i += 1;
                j += 1;
            }
            (Some(x), Some(y)) if x < y => {
                out.push(*x);
                i += 1;
            }
            (Some(_), Some(y)) => {
                out.push(*y);
                j += 1;
            }
            (Some(x), None) => {
                out.push(*x);
                i += 1;
            }
            (None, Some(y)) => {
                out.push(*y);
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}
