//! Independent reference computations used to validate the decoder.
//!
//! Everything here is exhaustive or exact and therefore only practical at
//! small distance.

use crate::decoding_graph::DecodingGraph;
use crate::error::Result;
use crate::experiments::MemoryExperiment;
use crate::noise::NoiseConfig;
use crate::pauli::PauliPair;
use crate::uf_decoder::Decoder;
use std::collections::HashMap;

/// Outcome of comparing the decoder with maximum likelihood on every
/// single and pair erasure pattern.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ErasureMlReport {
    pub cases: u64,
    /// Cases whose ML decision is unique.
    pub decisive: u64,
    /// Cases where the decoder picked a class that is not most likely.
    pub disagreements: u64,
    pub decoder_failures: u64,
    /// Expected ML failures summed over cases (ties split evenly).
    pub ml_failures: f64,
}

impl ErasureMlReport {
    pub fn agrees(&self) -> bool {
        self.cases > 0 && self.disagreements == 0
    }
}

/// Decoder mask and true mask for every replacement Pauli assignment on the
/// erased `slots`.
fn enumerate_assignments(exp: &MemoryExperiment, decoder: &mut Decoder<'_>, graph: &DecodingGraph, slots: &[u32]) -> Result<Vec<(Vec<u32>, u8, u8)>> {
    let table = exp.fault_table();
    let overlay = graph.overlay_slots(slots)?;
    let n = 16usize.pow(slots.len() as u32);
    let mut out = Vec::with_capacity(n);
    let mut parity = vec![false; table.circuit().num_detectors()];
    for code in 0..n {
        parity.iter_mut().for_each(|b| *b = false);
        let mut truth = 0u8;
        for (k, &slot) in slots.iter().enumerate() {
            let pauli = PauliPair::from_code(((code >> (4 * k)) & 15) as u8);
            let (dets, mask) = table.gate_effect(slot, pauli);
            for &d in dets {
                parity[d as usize] ^= true;
            }
            truth ^= mask;
        }
        let defects: Vec<u32> = (0..parity.len() as u32).filter(|&d| parity[d as usize]).collect();
        let guess = decoder.parity(&overlay, &defects)?;
        out.push((defects, truth, guess));
    }
    Ok(out)
}

fn score(cases: &[(Vec<u32>, u8, u8)], report: &mut ErasureMlReport) {
    let mut by_syndrome: HashMap<&[u32], [u64; 4]> = HashMap::new();
    for (defects, truth, _) in cases {
        by_syndrome.entry(defects.as_slice()).or_default()[*truth as usize] += 1;
    }
    for (defects, truth, guess) in cases {
        let counts = by_syndrome[defects.as_slice()];
        let best = *counts.iter().max().expect("four classes");
        let winners = counts.iter().filter(|&&c| c == best).count();
        report.cases += 1;
        report.decisive += (winners == 1) as u64;
        report.disagreements += (counts[*guess as usize] != best) as u64;
        report.decoder_failures += (guess != truth) as u64;
        // ML guesses uniformly among the winners.
        let p_right = if counts[*truth as usize] == best { 1.0 / winners as f64 } else { 0.0 };
        report.ml_failures += 1.0 - p_right;
    }
}

/// Compare the decoder with exact maximum likelihood on every erasure of one
/// gate and of every pair of gates, each with all uniformly likely
/// replacement Paulis. Pure erasure noise, distance `d`.
pub fn exhaustive_erasure_ml(d: usize) -> Result<ErasureMlReport> {
    let exp = MemoryExperiment::new(d, NoiseConfig::erasure(0.01, 1.0))?;
    let graph = exp.graph().expect("noisy circuit has a graph");
    let mut decoder = Decoder::new(graph);
    let slots = graph.num_gate_slots() as u32;
    let mut report = ErasureMlReport::default();
    for a in 0..slots {
        score(&enumerate_assignments(&exp, &mut decoder, graph, &[a])?, &mut report);
        for b in a + 1..slots {
            score(&enumerate_assignments(&exp, &mut decoder, graph, &[a, b])?, &mut report);
        }
    }
    Ok(report)
}

/// Same comparison on `samples` random triples of distinct erased gates.
/// Three erasures are the fewest that can defeat a distance-3 code, so this
/// exercises cases where the most likely class is not always right.
pub fn sampled_triple_erasure_ml(d: usize, samples: usize, seed: u64) -> Result<ErasureMlReport> {
    use rand::seq::index::sample;
    let exp = MemoryExperiment::new(d, NoiseConfig::erasure(0.01, 1.0))?;
    let graph = exp.graph().expect("noisy circuit has a graph");
    let mut decoder = Decoder::new(graph);
    let mut rng = crate::noise::trial_rng(seed, 0);
    let mut report = ErasureMlReport::default();
    for _ in 0..samples {
        let mut slots: Vec<u32> = sample(&mut rng, graph.num_gate_slots(), 3).into_iter().map(|s| s as u32).collect();
        slots.sort_unstable();
        score(&enumerate_assignments(&exp, &mut decoder, graph, &slots)?, &mut report);
    }
    Ok(report)
}

/// Exact decoder failure probability restricted to trials with at most two
/// erasures, plus the probability of three or more (the truncation bound).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErasureBracket {
    /// `P(fail and at most two erasures)`.
    pub truncated: f64,
    /// `P(three or more erasures)`.
    pub tail: f64,
}

impl ErasureBracket {
    pub fn lower(&self) -> f64 {
        self.truncated
    }

    pub fn upper(&self) -> f64 {
        self.truncated + self.tail
    }
}

pub fn erasure_failure_bracket(d: usize, p: f64) -> Result<ErasureBracket> {
    let exp = MemoryExperiment::new(d, NoiseConfig::erasure(p.max(1e-9), 1.0))?;
    let graph = exp.graph().expect("noisy circuit has a graph");
    let mut decoder = Decoder::new(graph);
    let n = graph.num_gate_slots() as u32;
    let fail_fraction = |cases: Vec<(Vec<u32>, u8, u8)>| {
        cases.iter().filter(|(_, t, g)| t != g).count() as f64 / cases.len() as f64
    };
    let (mut single, mut pair) = (0.0, 0.0);
    for a in 0..n {
        single += fail_fraction(enumerate_assignments(&exp, &mut decoder, graph, &[a])?);
        for b in a + 1..n {
            pair += fail_fraction(enumerate_assignments(&exp, &mut decoder, graph, &[a, b])?);
        }
    }
    let q = 1.0 - p;
    let nf = n as f64;
    let p0 = q.powf(nf);
    let p1 = p * q.powf(nf - 1.0);
    let p2 = p * p * q.powf(nf - 2.0);
    let tail = (1.0 - p0 - nf * p1 - nf * (nf - 1.0) / 2.0 * p2).max(0.0);
    Ok(ErasureBracket { truncated: p1 * single + p2 * pair, tail })
}

/// Trials where the parity shortcut and explicit peeling disagree, and
/// trials where the peeled edge set fails to reproduce the defects.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PeelComparison {
    pub trials: u64,
    pub parity_mismatches: u64,
    pub invalid_corrections: u64,
}

pub fn shortcut_vs_peel(d: usize, cfg: NoiseConfig, trials: u64) -> Result<PeelComparison> {
    let exp = MemoryExperiment::new(d, cfg)?;
    let graph = exp.graph().expect("noisy circuit has a graph");
    let mut fast = Decoder::new(graph);
    let mut slow = Decoder::new(graph);
    let mut out = PeelComparison { trials, ..Default::default() };
    let mut boundary = vec![false; graph.num_vertices()];
    for t in 0..trials {
        let (record, _) = exp.inspect_trial(t)?;
        let overlay = graph.overlay_slots(&record.erased_slots)?;
        let a = fast.parity(&overlay, &record.defects)?;
        let (b, edges) = slow.peel_parity(&overlay, &record.defects)?;
        out.parity_mismatches += (a != b) as u64;
        boundary.iter_mut().for_each(|x| *x = false);
        for &e in &edges {
            let edge = graph.edge(e);
            boundary[edge.u as usize] ^= true;
            boundary[edge.v as usize] ^= true;
        }
        for &v in &record.defects {
            boundary[v as usize] ^= true;
        }
        let residual = boundary.iter().enumerate().any(|(v, &x)| x && !graph.is_boundary(v as u32));
        out.invalid_corrections += residual as u64;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bracket_tail_is_a_probability() {
        let b = erasure_failure_bracket(3, 0.001).unwrap();
        assert!(b.tail > 0.0 && b.tail < 1e-4);
        assert!(b.lower() <= b.upper());
    }

    #[test]
    fn peel_comparison_counts_trials() {
        let c = shortcut_vs_peel(3, NoiseConfig::erasure(0.02, 0.5).with_seed(1), 200).unwrap();
        assert_eq!(c, PeelComparison { trials: 200, parity_mismatches: 0, invalid_corrections: 0 });
    }
}
