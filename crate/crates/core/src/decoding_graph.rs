//! Space-time decoding graph built from the circuit's single-fault effects.
//!
//! Every detector belongs to the class of its check, and each fault's effect
//! splits into one component per class. Each component flips at most two
//! detectors of its class and becomes one edge (or a boundary edge when it
//! flips only one). Class `c` has its own boundary vertex `num_detectors + c`,
//! so the graph is the disjoint union of two matching graphs, one per logical
//! bit.

use crate::code_model::{GateKind, Lattice, Schedule};
use crate::error::{Error, Result};
use crate::noise::{GateChannel, GateErrorKind, NoiseConfig, NoiseMode};
use crate::pauli::PauliPair;
use crate::pauli_sim::{Circuit, FaultTable};
use serde::Serialize;
use std::collections::HashMap;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Edge {
    pub u: u32,
    /// Second endpoint; a boundary vertex when `v >= num_detectors`.
    pub v: u32,
    pub weight: u32,
    /// Largest probability among the mechanisms on this edge.
    pub p_max: f64,
    /// Bit `c` set when the edge flips logical `c`.
    pub logical: u8,
    pub mechanisms: u32,
}

/// Erased edges of one trial, read as weight 0 by the decoder.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ErasureOverlay {
    pub edges: Vec<u32>,
}

impl ErasureOverlay {
    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }
}

#[derive(Debug, Clone)]
pub struct DecodingGraph {
    num_detectors: usize,
    edges: Vec<Edge>,
    /// CSR incidence: `adj[adj_offsets[v]..adj_offsets[v + 1]]` are edge ids, ascending.
    adj_offsets: Vec<u32>,
    adj: Vec<u32>,
    /// CSR map from gate slot to the edges any fault there can flip.
    slot_offsets: Vec<u32>,
    slot_edges: Vec<u32>,
    gates_per_round: u32,
    num_ancillas: usize,
    /// Merged mechanisms whose logical masks disagreed.
    pub mask_conflicts: usize,
}

/// How mechanism probabilities are assigned.
#[derive(Debug, Clone, Copy)]
enum ProbabilityModel<'a> {
    Noise(&'a NoiseConfig),
}

/// Build the decoding graph for a distance-`d` memory experiment of `d` rounds.
pub fn build_graph(lattice: &Lattice, schedule: &Schedule, cfg: &NoiseConfig) -> Result<DecodingGraph> {
    if cfg.p <= 0.0 {
        return Err(Error::ZeroErrorRate);
    }
    cfg.validate()?;
    let table = FaultTable::new(Circuit::new(lattice, schedule, lattice.distance));
    DecodingGraph::from_table(&table, schedule, cfg)
}

/// Integer edge weight for a mechanism probability.
pub fn edge_weight(p: f64) -> u32 {
    (-p.ln()).round().max(1.0) as u32
}

/// Probability of the most likely fault of `pauli` on a gate of `kind`.
fn mechanism_probability(cfg: &NoiseConfig, kind: GateKind, pauli: PauliPair) -> f64 {
    let channel = GateChannel::for_gate(cfg, kind);
    let q = channel.probability(GateErrorKind::Pauli(pauli));
    if q > 0.0 || cfg.mode != NoiseMode::Erasure {
        return q;
    }
    // Pure erasure: weights only matter outside the overlay, so fall back to
    // the rate at which an erasure leaves this particular Pauli behind.
    cfg.p_erasure() / 16.0
}

impl DecodingGraph {
    /// Build from a precomputed fault table. Unlike [`build_graph`] this
    /// accepts `p = 0`, in which case only measurement edges exist.
    pub fn from_table(table: &FaultTable, schedule: &Schedule, cfg: &NoiseConfig) -> Result<Self> {
        Self::build(table, schedule, ProbabilityModel::Noise(cfg))
    }

    fn build(table: &FaultTable, schedule: &Schedule, model: ProbabilityModel<'_>) -> Result<Self> {
        let ProbabilityModel::Noise(cfg) = model;
        let circuit = table.circuit();
        let n = circuit.num_detectors();
        let per_round = circuit.gates_per_round() as u32;
        let mut builder = Builder { num_detectors: n, edges: Vec::new(), index: HashMap::new(), conflicts: 0 };
        let probs: Vec<[f64; 16]> = schedule
            .gates
            .iter()
            .map(|g| {
                let mut row = [0.0; 16];
                for pauli in PauliPair::non_identity() {
                    row[pauli.code() as usize] = mechanism_probability(cfg, g.kind, pauli);
                }
                row
            })
            .collect();

        let mut slot_offsets = vec![0u32];
        let mut slot_edges = Vec::new();
        for slot in 0..circuit.num_gate_slots() as u32 {
            let row = &probs[(slot % per_round) as usize];
            let mut here = Vec::new();
            for pauli in PauliPair::non_identity() {
                let q = row[pauli.code() as usize];
                if q <= 0.0 {
                    continue;
                }
                let (dets, mask) = table.gate_effect(slot, pauli);
                for class in 0..2u8 {
                    if let Some(e) = builder.add_component(circuit, dets, mask, class, q)? {
                        here.push(e);
                    }
                }
            }
            here.sort_unstable();
            here.dedup();
            slot_edges.extend_from_slice(&here);
            slot_offsets.push(slot_edges.len() as u32);
        }
        if cfg.p_m > 0.0 {
            for slot in 0..(circuit.rounds() * circuit.num_ancillas()) as u32 {
                let dets = table.spam_effect(slot);
                let class = circuit.detector_class(dets[0] as usize);
                builder.add_component(circuit, &dets, 0, class, cfg.p_m)?;
            }
        }

        let Builder { edges, conflicts, .. } = builder;
        let vertices = n + 2;
        let mut degree = vec![0u32; vertices + 1];
        for e in &edges {
            degree[e.u as usize + 1] += 1;
            degree[e.v as usize + 1] += 1;
        }
        for v in 0..vertices {
            degree[v + 1] += degree[v];
        }
        let adj_offsets = degree;
        let mut fill = adj_offsets.clone();
        let mut adj = vec![0u32; edges.len() * 2];
        for (id, e) in edges.iter().enumerate() {
            for x in [e.u, e.v] {
                adj[fill[x as usize] as usize] = id as u32;
                fill[x as usize] += 1;
            }
        }
        if conflicts > 0 {
            log::debug!("{conflicts} merged mechanisms disagreed on their logical mask");
        }
        Ok(Self {
            num_detectors: n,
            edges,
            adj_offsets,
            adj,
            slot_offsets,
            slot_edges,
            gates_per_round: per_round,
            num_ancillas: circuit.num_ancillas(),
            mask_conflicts: conflicts,
        })
    }

    pub fn num_detectors(&self) -> usize {
        self.num_detectors
    }

    /// Detectors plus the two boundary vertices.
    pub fn num_vertices(&self) -> usize {
        self.num_detectors + 2
    }

    pub fn boundary_vertex(&self, class: u8) -> u32 {
        (self.num_detectors + class as usize) as u32
    }

    #[inline]
    pub fn is_boundary(&self, v: u32) -> bool {
        v as usize >= self.num_detectors
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    #[inline]
    pub fn edge(&self, id: u32) -> &Edge {
        &self.edges[id as usize]
    }

    /// Edge ids incident to `v`, ascending.
    #[inline]
    pub fn incident(&self, v: u32) -> &[u32] {
        &self.adj[self.adj_offsets[v as usize] as usize..self.adj_offsets[v as usize + 1] as usize]
    }

    pub fn find_edge(&self, a: u32, b: u32) -> Option<u32> {
        self.incident(a).iter().copied().find(|&e| {
            let edge = &self.edges[e as usize];
            (edge.u == a && edge.v == b) || (edge.u == b && edge.v == a)
        })
    }

    /// Edges touched by any fault at the gate in `slot`.
    pub fn slot_edges(&self, slot: u32) -> &[u32] {
        let s = slot as usize;
        &self.slot_edges[self.slot_offsets[s] as usize..self.slot_offsets[s + 1] as usize]
    }

    pub fn num_gate_slots(&self) -> usize {
        self.slot_offsets.len() - 1
    }

    /// Overlay for a list of erased gate slots.
    pub fn overlay_slots(&self, slots: &[u32]) -> Result<ErasureOverlay> {
        let mut edges = Vec::new();
        self.overlay_slots_into(slots, &mut edges)?;
        Ok(ErasureOverlay { edges })
    }

    pub fn overlay_slots_into(&self, slots: &[u32], edges: &mut Vec<u32>) -> Result<()> {
        edges.clear();
        for &slot in slots {
            if slot as usize >= self.num_gate_slots() {
                return Err(Error::UnknownLocation { round: slot / self.gates_per_round, gate: slot % self.gates_per_round });
            }
            edges.extend_from_slice(self.slot_edges(slot));
        }
        edges.sort_unstable();
        edges.dedup();
        Ok(())
    }

    /// Adjacency export for external decoder cross-checks.
    pub fn to_json(&self) -> serde_json::Value {
        let vertices: Vec<_> = (0..self.num_vertices())
            .map(|v| {
                if v < self.num_detectors {
                    serde_json::json!({"id": v, "layer": v / self.num_ancillas, "ancilla": v % self.num_ancillas})
                } else {
                    serde_json::json!({"id": v, "boundary": v - self.num_detectors})
                }
            })
            .collect();
        serde_json::json!({
            "num_detectors": self.num_detectors,
            "vertices": vertices,
            "edges": self.edges,
        })
    }
}

/// Map a trial's erasure record onto the graph.
pub fn overlay_erasures(
    graph: &DecodingGraph,
    circuit: &Circuit,
    record: &crate::noise::ErasureRecord,
) -> Result<ErasureOverlay> {
    let slots = record
        .locations()
        .map(|loc| circuit.slot(loc).ok_or(Error::UnknownLocation { round: loc.round, gate: loc.gate }))
        .collect::<Result<Vec<_>>>()?;
    graph.overlay_slots(&slots)
}

struct Builder {
    num_detectors: usize,
    edges: Vec<Edge>,
    index: HashMap<(u32, u32), u32>,
    conflicts: usize,
}

impl Builder {
    /// Add the class-`class` part of an effect; returns its edge id.
    fn add_component(&mut self, circuit: &Circuit, dets: &[u32], mask: u8, class: u8, q: f64) -> Result<Option<u32>> {
        let mut ends = [0u32; 2];
        let mut count = 0usize;
        for &d in dets {
            if circuit.detector_class(d as usize) == class {
                if count < 2 {
                    ends[count] = d;
                }
                count += 1;
            }
        }
        let flips = (mask >> class) & 1;
        let (u, v) = match count {
            0 if flips == 1 => return Err(Error::UndetectableLogical(class)),
            0 => return Ok(None),
            1 => (ends[0], (self.num_detectors + class as usize) as u32),
            2 => (ends[0], ends[1]),
            k => return Err(Error::Hyperedge(k)),
        };
        let logical = flips << class;
        let id = match self.index.get(&(u, v)) {
            Some(&id) => {
                let e = &mut self.edges[id as usize];
                if e.logical != logical {
                    self.conflicts += 1;
                    if q > e.p_max {
                        e.logical = logical;
                    }
                }
                if q > e.p_max {
                    e.p_max = q;
                    e.weight = edge_weight(q);
                }
                e.mechanisms += 1;
                id
            }
            None => {
                let id = self.edges.len() as u32;
                self.edges.push(Edge { u, v, weight: edge_weight(q), p_max: q, logical, mechanisms: 1 });
                self.index.insert((u, v), id);
                id
            }
        };
        Ok(Some(id))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code_model::{build_lattice, build_schedule, CodeConfig};
    use std::collections::BTreeSet;

    fn setup(d: usize) -> (Lattice, Schedule) {
        let lattice = build_lattice(&CodeConfig::new(d).unwrap()).unwrap();
        let schedule = build_schedule(&lattice);
        (lattice, schedule)
    }

    #[test]
    fn weight_rounding() {
        assert_eq!(edge_weight((-5.0f64).exp()), 5);
        assert_eq!(edge_weight(0.9), 1);
        assert_eq!(edge_weight((-2.4f64).exp()), 2);
        assert_eq!(edge_weight((-2.6f64).exp()), 3);
    }

    #[test]
    fn rejects_zero_rate() {
        let (l, s) = setup(3);
        assert_eq!(build_graph(&l, &s, &NoiseConfig::erasure(0.0, 0.5)).unwrap_err(), Error::ZeroErrorRate);
    }

    #[test]
    fn no_parallel_mask_conflicts() {
        for d in [3, 5, 7] {
            let (l, s) = setup(d);
            let g = build_graph(&l, &s, &NoiseConfig::erasure(0.01, 0.5).with_spam(0.01)).unwrap();
            assert_eq!(g.mask_conflicts, 0, "d={d}");
        }
    }

    #[test]
    fn edges_connect_same_class_detectors() {
        let (l, s) = setup(5);
        let g = build_graph(&l, &s, &NoiseConfig::erasure(0.01, 0.0).with_spam(0.01)).unwrap();
        let circuit = Circuit::new(&l, &s, 5);
        for e in g.edges() {
            let c = circuit.detector_class(e.u as usize);
            if g.is_boundary(e.v) {
                assert_eq!(e.v, g.boundary_vertex(c));
            } else {
                assert_eq!(circuit.detector_class(e.v as usize), c);
            }
            assert!(e.logical == 0 || e.logical == 1 << c);
        }
    }

    /// Fewest edges whose product flips logical `class` with no net syndrome.
    fn graph_distance(g: &DecodingGraph, class: u8) -> usize {
        // BFS over (vertex, logical parity) from the class boundary.
        let start = g.boundary_vertex(class);
        let mut dist = vec![[usize::MAX; 2]; g.num_vertices()];
        dist[start as usize][0] = 0;
        let mut queue = std::collections::VecDeque::from([(start, 0u8)]);
        while let Some((v, par)) = queue.pop_front() {
            let dv = dist[v as usize][par as usize];
            for &e in g.incident(v) {
                let edge = g.edge(e);
                let w = if edge.u == v { edge.v } else { edge.u };
                let np = par ^ ((edge.logical >> class) & 1);
                if dist[w as usize][np as usize] == usize::MAX {
                    dist[w as usize][np as usize] = dv + 1;
                    queue.push_back((w, np));
                }
            }
        }
        dist[start as usize][1]
    }

    #[test]
    fn circuit_distance_equals_code_distance() {
        for d in [3, 5, 7] {
            let (l, s) = setup(d);
            let g = build_graph(&l, &s, &NoiseConfig::erasure(0.01, 0.0).with_spam(0.01)).unwrap();
            for class in 0..2u8 {
                assert_eq!(graph_distance(&g, class), d, "d={d} class={class}");
            }
        }
    }

    #[test]
    fn uniform_order_loses_distance() {
        let l = build_lattice(&CodeConfig::new(5).unwrap()).unwrap();
        let s = crate::code_model::build_schedule_with_order(&l, crate::code_model::GateOrder::Uniform);
        let g = build_graph(&l, &s, &NoiseConfig::erasure(0.01, 0.0)).unwrap();
        assert!((0..2).any(|c| graph_distance(&g, c) < 5));
    }

    #[test]
    fn edge_set_equals_exhaustive_injection_oracle() {
        let (l, s) = setup(3);
        let cfg = NoiseConfig::erasure(0.01, 0.0).with_spam(0.01);
        let g = build_graph(&l, &s, &cfg).unwrap();
        let circuit = Circuit::new(&l, &s, 3);
        let boundary = |c: u8| (circuit.num_detectors() + c as usize) as u32;
        let mut expected = BTreeSet::new();
        for slot in 0..circuit.num_gate_slots() as u32 {
            for pauli in PauliPair::non_identity() {
                let faults = crate::noise::TrialFaults {
                    gates: vec![crate::noise::GateFault { slot, pauli, erased: false }],
                    spam: vec![],
                };
                let (defects, _) = circuit.simulate(&faults);
                for c in 0..2u8 {
                    let part: Vec<u32> = defects.iter().copied().filter(|&x| circuit.detector_class(x as usize) == c).collect();
                    match part.len() {
                        0 => {}
                        1 => {
                            expected.insert((part[0], boundary(c)));
                        }
                        2 => {
                            expected.insert((part[0], part[1]));
                        }
                        k => panic!("{k} detectors from one class"),
                    }
                }
            }
        }
        for slot in 0..(3 * circuit.num_ancillas()) as u32 {
            expected.insert((slot, slot + circuit.num_ancillas() as u32));
        }
        let actual: BTreeSet<_> = g.edges().iter().map(|e| (e.u, e.v)).collect();
        assert_eq!(actual, expected);
    }

    #[test]
    fn parallel_edges_keep_max_probability() {
        let (l, s) = setup(3);
        let g = build_graph(&l, &s, &NoiseConfig::erasure(0.02, 0.0).with_spam(0.0001)).unwrap();
        let max = g.edges().iter().map(|e| e.p_max).fold(0.0, f64::max);
        assert!((max - 0.02 / 15.0).abs() < 1e-15);
        assert!(g.edges().iter().any(|e| e.mechanisms > 1));
    }

    #[test]
    fn weights_fall_as_p_rises() {
        let (l, s) = setup(3);
        let lo = build_graph(&l, &s, &NoiseConfig::erasure(0.001, 0.5)).unwrap();
        let hi = build_graph(&l, &s, &NoiseConfig::erasure(0.05, 0.5)).unwrap();
        assert_eq!(lo.edges().len(), hi.edges().len());
        for (a, b) in lo.edges().iter().zip(hi.edges()) {
            assert_eq!((a.u, a.v), (b.u, b.v));
            assert!(b.weight <= a.weight);
        }
    }

    #[test]
    fn overlays() {
        let (l, s) = setup(3);
        let g = build_graph(&l, &s, &NoiseConfig::erasure(0.01, 0.5)).unwrap();
        assert!(g.overlay_slots(&[]).unwrap().is_empty());
        let one = g.overlay_slots(&[30]).unwrap();
        assert_eq!(one.edges, g.slot_edges(30));
        assert_eq!(g.overlay_slots(&[30, 30]).unwrap(), one);
        assert!(g.overlay_slots(&[10_000]).is_err());
    }

    #[test]
    fn json_export_lists_everything() {
        let (l, s) = setup(3);
        let g = build_graph(&l, &s, &NoiseConfig::erasure(0.01, 0.5)).unwrap();
        let j = g.to_json();
        assert_eq!(j["vertices"].as_array().unwrap().len(), g.num_vertices());
        assert_eq!(j["edges"].as_array().unwrap().len(), g.edges().len());
    }
}
