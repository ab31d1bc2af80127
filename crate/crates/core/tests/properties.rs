use erasure_qec::code_model::{build_lattice, build_schedule, CodeConfig, GateKind};
use erasure_qec::decoding_graph::{build_graph, edge_weight};
use erasure_qec::experiments::{MemoryExperiment, TrialPolicy};
use erasure_qec::noise::{GateChannel, NoiseConfig};
use erasure_qec::pauli::{Pauli, PauliPair};
use erasure_qec::pauli_sim::{propagate, Circuit, FaultTable, PauliFrame};
use erasure_qec::uf_decoder::Decoder;
use proptest::prelude::*;

fn pauli() -> impl Strategy<Value = Pauli> {
    (0u8..4).prop_map(Pauli::from_code)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn gates_are_self_inverse(frame in prop::collection::vec(pauli(), 6), cnot: bool, c in 0usize..6, off in 1usize..6) {
        let t = (c + off) % 6;
        let kind = if cnot { GateKind::Cnot } else { GateKind::Cz };
        let mut f = PauliFrame::new(6);
        for (q, &p) in frame.iter().enumerate() {
            f.set(q, p);
        }
        let before = f.clone();
        propagate(&mut f, kind, c, t);
        propagate(&mut f, kind, c, t);
        prop_assert_eq!(f, before);
    }

    #[test]
    fn erasure_channel_sums_to_p(p in 0.0f64..0.5, r in 0.0f64..=1.0) {
        let ch = GateChannel::erasure(p, r);
        let sum: f64 = ch.outcomes().iter().map(|o| o.1).sum();
        prop_assert!((sum - p).abs() <= 1e-15);
        prop_assert!((ch.total() - p).abs() <= 1e-15);
    }

    #[test]
    fn biased_channel_has_the_dephasing_budget(p in 1e-4f64..0.1, eta in 1.0f64..1e6) {
        for kind in [GateKind::Cz, GateKind::Cnot] {
            let ch = GateChannel::biased(p, eta, kind);
            let dephasing = 2.0 * p + if kind == GateKind::Cz { p / eta } else { 0.0 };
            let other = ch.total() - dephasing;
            prop_assert!((other - 12.0 * p / eta).abs() < 1e-12, "{:?}", kind);
        }
    }

    #[test]
    fn weights_never_rise_with_probability(a in 1e-9f64..0.5, b in 1e-9f64..0.5) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assert!(edge_weight(hi) <= edge_weight(lo));
        prop_assert!(edge_weight(hi) >= 1);
    }

    #[test]
    fn fixed_seed_is_reproducible(seed in any::<u64>(), r in 0.0f64..=1.0) {
        let cfg = NoiseConfig::erasure(0.03, r).with_spam(0.003).with_seed(seed);
        let exp = MemoryExperiment::new(3, cfg).unwrap();
        let policy = TrialPolicy::fixed(700).with_batch_size(100);
        prop_assert_eq!(exp.run(&policy).unwrap(), exp.run(&policy).unwrap());
        prop_assert_eq!(exp.inspect_trial(3).unwrap(), exp.inspect_trial(3).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Random fault sets: the decoder always clears the syndrome and the
    /// parity shortcut agrees with peeling.
    #[test]
    fn decoding_random_fault_sets(faults in prop::collection::vec((0u32..600, 1u8..16, any::<bool>()), 0..12)) {
        let l = build_lattice(&CodeConfig::new(5).unwrap()).unwrap();
        let s = build_schedule(&l);
        let table = FaultTable::new(Circuit::new(&l, &s, 5));
        let graph = build_graph(&l, &s, &NoiseConfig::erasure(0.01, 0.5)).unwrap();
        let slots = table.circuit().num_gate_slots() as u32;
        let mut parity = vec![false; table.circuit().num_detectors()];
        let mut erased = vec![];
        for &(slot, code, is_erased) in &faults {
            let slot = slot % slots;
            let (dets, _) = table.gate_effect(slot, PauliPair::from_code(code));
            for &d in dets {
                parity[d as usize] ^= true;
            }
            if is_erased {
                erased.push(slot);
            }
        }
        let defects: Vec<u32> = (0..parity.len() as u32).filter(|&d| parity[d as usize]).collect();
        let overlay = graph.overlay_slots(&erased).unwrap();
        let mut dec = Decoder::new(&graph);
        let fast = dec.parity(&overlay, &defects).unwrap();
        let (slow, edges) = dec.peel_parity(&overlay, &defects).unwrap();
        prop_assert_eq!(fast, slow);
        for &e in &edges {
            let edge = graph.edge(e);
            for v in [edge.u, edge.v] {
                if !graph.is_boundary(v) {
                    parity[v as usize] ^= true;
                }
            }
        }
        prop_assert!(parity.iter().all(|&b| !b));
    }
}

/// Every single fault flips at most two detectors of each check class, or one
/// plus that class's boundary.
#[test]
fn single_faults_are_graphlike_at_d3() {
    let l = build_lattice(&CodeConfig::new(3).unwrap()).unwrap();
    let s = build_schedule(&l);
    let table = FaultTable::new(Circuit::new(&l, &s, 3));
    let circuit = table.circuit();
    for slot in 0..circuit.num_gate_slots() as u32 {
        for code in 1..16 {
            let (dets, _) = table.gate_effect(slot, PauliPair::from_code(code));
            for class in 0..2 {
                let n = dets.iter().filter(|&&d| circuit.detector_class(d as usize) == class).count();
                assert!(n <= 2, "slot {slot} pauli {code}: {n} class-{class} detectors");
            }
        }
    }
}

/// An erasure only disturbs detectors near the erased gate: within one round
/// either side and within one plaquette step.
#[test]
fn erasure_effects_are_local_at_d3() {
    let l = build_lattice(&CodeConfig::new(3).unwrap()).unwrap();
    let s = build_schedule(&l);
    let table = FaultTable::new(Circuit::new(&l, &s, 3));
    let circuit = table.circuit();
    for slot in 0..circuit.num_gate_slots() as u32 {
        let loc = circuit.location(slot);
        let anc = circuit.slot_ancilla(slot) as usize;
        let a = l.stabilizers[anc].anchor;
        for code in 0..16 {
            let (dets, _) = table.gate_effect(slot, PauliPair::from_code(code));
            for &d in dets {
                let (layer, other) = circuit.detector_coords(d as usize);
                let b = l.stabilizers[other].anchor;
                assert!(layer as i64 - loc.round as i64 <= 2 && layer as u32 >= loc.round);
                assert!((a.row - b.row).abs() <= 2 && (a.col - b.col).abs() <= 2);
            }
        }
    }
}
