//! Weighted Union-Find decoder.
//!
//! Clusters start at the defects and at erased (weight-0) edges. Every round
//! each odd cluster that does not touch a boundary adds one unit of growth
//! to each of its frontier edges; an edge whose growth reaches its weight
//! becomes solid and merges its endpoints' clusters. Rounds in which no edge
//! can become solid are skipped in one step, which leaves the result
//! unchanged.
//!
//! The logical outcome is read off a spanning forest of the solid edges: the
//! XOR, over defects, of the logical masks along each defect's tree path to
//! its root. This equals the parity of the correction that peeling the same
//! forest would produce, and [`ClusterForest::peel`] is kept to check that.

use crate::decoding_graph::{DecodingGraph, ErasureOverlay};
use crate::error::{Error, Result};
use serde::Serialize;

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct DecodeResult {
    /// Predicted flip of each logical.
    pub correction: [bool; 2],
    pub clusters: usize,
    /// Growth rounds including skipped ones.
    pub growth_rounds: u32,
    pub solid_edges: Option<Vec<u32>>,
}

/// Per-trial decoder state; reusable across trials on one graph.
#[derive(Debug, Clone)]
pub struct ClusterForest {
    parent: Vec<u32>,
    size: Vec<u32>,
    odd: Vec<bool>,
    boundary: Vec<bool>,
    members: Vec<Vec<u32>>,
    defect: Vec<bool>,
    seen: Vec<bool>,
    touched: Vec<u32>,

    growth: Vec<u32>,
    grown: Vec<u32>,
    rate: Vec<u8>,
    solid: Vec<bool>,
    solid_list: Vec<u32>,

    // spanning forest
    visited: Vec<bool>,
    phi: Vec<u8>,
    parent_edge: Vec<u32>,
    order: Vec<u32>,

    defects: Vec<u32>,
    finished: bool,
    growth_rounds: u32,
    trace: Option<Vec<Vec<u32>>>,
}

impl ClusterForest {
    pub fn new(graph: &DecodingGraph) -> Self {
        let n = graph.num_detectors();
        let m = graph.edges().len();
        Self {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
            odd: vec![false; n],
            boundary: vec![false; n],
            members: vec![Vec::new(); n],
            defect: vec![false; n],
            seen: vec![false; n],
            touched: Vec::new(),
            growth: vec![0; m],
            grown: Vec::new(),
            rate: vec![0; m],
            solid: vec![false; m],
            solid_list: Vec::new(),
            visited: vec![false; n],
            phi: vec![0; n],
            parent_edge: vec![NONE; n],
            order: Vec::new(),
            defects: Vec::new(),
            finished: false,
            growth_rounds: 0,
            trace: None,
        }
    }

    /// Record the edges solidified in each growth round.
    pub fn set_tracing(&mut self, on: bool) {
        self.trace = on.then(Vec::new);
    }

    /// Line-delimited JSON of the cluster evolution of the last decode.
    pub fn trace_lines(&self) -> Vec<String> {
        self.trace
            .iter()
            .flatten()
            .enumerate()
            .map(|(round, edges)| serde_json::json!({"round": round, "solid": edges}).to_string())
            .collect()
    }

    pub fn solid_edges(&self) -> &[u32] {
        &self.solid_list
    }

    fn reset(&mut self) {
        for &v in &self.touched {
            let v = v as usize;
            self.parent[v] = v as u32;
            self.size[v] = 1;
            self.odd[v] = false;
            self.boundary[v] = false;
            self.members[v].clear();
            self.defect[v] = false;
            self.seen[v] = false;
            self.visited[v] = false;
            self.phi[v] = 0;
            self.parent_edge[v] = NONE;
        }
        self.touched.clear();
        for &e in &self.solid_list {
            self.solid[e as usize] = false;
        }
        self.solid_list.clear();
        for &e in &self.grown {
            self.growth[e as usize] = 0;
        }
        self.grown.clear();
        self.order.clear();
        self.defects.clear();
        self.finished = false;
        self.growth_rounds = 0;
        if let Some(t) = &mut self.trace {
            t.clear();
        }
    }

    #[inline]
    fn touch(&mut self, v: u32) {
        if !self.seen[v as usize] {
            self.seen[v as usize] = true;
            self.members[v as usize].push(v);
            self.touched.push(v);
        }
    }

    #[inline]
    fn find(&mut self, mut v: u32) -> u32 {
        let mut root = v;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        while self.parent[v as usize] != root {
            let next = self.parent[v as usize];
            self.parent[v as usize] = root;
            v = next;
        }
        root
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        // Larger cluster wins; ties go to the smaller root index.
        let (root, child) = match self.size[ra as usize].cmp(&self.size[rb as usize]) {
            std::cmp::Ordering::Greater => (ra, rb),
            std::cmp::Ordering::Less => (rb, ra),
            std::cmp::Ordering::Equal => (ra.min(rb), ra.max(rb)),
        };
        let (r, c) = (root as usize, child as usize);
        self.parent[c] = root;
        self.size[r] += self.size[c];
        self.odd[r] ^= self.odd[c];
        self.boundary[r] |= self.boundary[c];
        let moved = std::mem::take(&mut self.members[c]);
        self.members[r].extend_from_slice(&moved);
        self.members[c] = moved;
        self.members[c].clear();
    }

    fn solidify(&mut self, graph: &DecodingGraph, e: u32) {
        self.solid[e as usize] = true;
        self.solid_list.push(e);
        let edge = graph.edge(e);
        self.touch(edge.u);
        if graph.is_boundary(edge.v) {
            let r = self.find(edge.u);
            self.boundary[r as usize] = true;
        } else {
            self.touch(edge.v);
            self.union(edge.u, edge.v);
        }
    }

    /// Grow clusters until none is odd and boundary-free.
    pub fn grow(&mut self, graph: &DecodingGraph, overlay: &ErasureOverlay, defects: &[u32]) -> Result<()> {
        self.reset();
        for &d in defects {
            if d as usize >= graph.num_detectors() {
                return Err(Error::UnknownVertex(d));
            }
            self.touch(d);
            self.defect[d as usize] ^= true;
            self.odd[d as usize] ^= true;
        }
        self.defects.extend(defects.iter().copied().filter(|&d| self.defect[d as usize]));
        self.defects.sort_unstable();
        self.defects.dedup();
        for &e in &overlay.edges {
            if !self.solid[e as usize] {
                self.solidify(graph, e);
            }
        }

        let mut active: Vec<u32> = Vec::new();
        let mut frontier: Vec<u32> = Vec::new();
        let mut fresh: Vec<u32> = Vec::new();
        loop {
            active.clear();
            for i in 0..self.defects.len() {
                let r = self.find(self.defects[i]);
                if self.odd[r as usize] && !self.boundary[r as usize] {
                    active.push(r);
                }
            }
            active.sort_unstable();
            active.dedup();
            if active.is_empty() {
                break;
            }
            frontier.clear();
            for &r in &active {
                for i in 0..self.members[r as usize].len() {
                    let v = self.members[r as usize][i];
                    for &e in graph.incident(v) {
                        if self.solid[e as usize] {
                            continue;
                        }
                        let edge = graph.edge(e);
                        let other = if edge.u == v { edge.v } else { edge.u };
                        if !graph.is_boundary(other) && self.find(other) == r {
                            continue;
                        }
                        if self.rate[e as usize] == 0 {
                            frontier.push(e);
                        }
                        self.rate[e as usize] += 1;
                    }
                }
            }
            if frontier.is_empty() {
                return Err(Error::UnfinishedForest);
            }
            let step = frontier
                .iter()
                .map(|&e| {
                    let need = graph.edge(e).weight.saturating_sub(self.growth[e as usize]);
                    need.div_ceil(self.rate[e as usize] as u32).max(1)
                })
                .min()
                .unwrap_or(1);
            self.growth_rounds += step;
            fresh.clear();
            for &e in &frontier {
                if self.growth[e as usize] == 0 {
                    self.grown.push(e);
                }
                let g = &mut self.growth[e as usize];
                *g += step * self.rate[e as usize] as u32;
                self.rate[e as usize] = 0;
                if *g >= graph.edge(e).weight {
                    fresh.push(e);
                }
            }
            fresh.sort_unstable();
            for &e in &fresh {
                self.solidify(graph, e);
            }
            if let Some(t) = &mut self.trace {
                t.push(fresh.clone());
            }
        }
        self.finished = true;
        Ok(())
    }

    /// Build the spanning forest of every cluster that holds a defect.
    fn span(&mut self, graph: &DecodingGraph) -> Result<()> {
        if !self.finished {
            return Err(Error::UnfinishedForest);
        }
        self.order.clear();
        let mut roots: Vec<u32> = Vec::with_capacity(self.defects.len());
        for i in 0..self.defects.len() {
            let d = self.defects[i];
            roots.push(self.find(d));
        }
        roots.sort_unstable();
        roots.dedup();
        let mut seeds: Vec<u32> = Vec::new();
        for &r in &roots {
            let start = self.order.len();
            if self.boundary[r as usize] {
                seeds.clear();
                for &v in &self.members[r as usize] {
                    for &e in graph.incident(v) {
                        if self.solid[e as usize] && graph.is_boundary(graph.edge(e).v) {
                            seeds.push(e);
                        }
                    }
                }
                seeds.sort_unstable();
                for &e in &seeds {
                    let v = graph.edge(e).u;
                    if !self.visited[v as usize] {
                        self.visited[v as usize] = true;
                        self.phi[v as usize] = graph.edge(e).logical;
                        self.parent_edge[v as usize] = e;
                        self.order.push(v);
                    }
                }
            } else {
                let root = *self.members[r as usize].iter().min().expect("cluster has members");
                self.visited[root as usize] = true;
                self.phi[root as usize] = 0;
                self.parent_edge[root as usize] = NONE;
                self.order.push(root);
            }
            let mut head = start;
            while head < self.order.len() {
                let v = self.order[head];
                head += 1;
                for &e in graph.incident(v) {
                    if !self.solid[e as usize] {
                        continue;
                    }
                    let edge = graph.edge(e);
                    let w = if edge.u == v { edge.v } else { edge.u };
                    if graph.is_boundary(w) || self.visited[w as usize] {
                        continue;
                    }
                    self.visited[w as usize] = true;
                    self.phi[w as usize] = self.phi[v as usize] ^ edge.logical;
                    self.parent_edge[w as usize] = e;
                    self.order.push(w);
                }
            }
        }
        Ok(())
    }

    /// Logical parity of the peeling correction, without peeling.
    pub fn shortcut_parity(&mut self, graph: &DecodingGraph) -> Result<u8> {
        self.span(graph)?;
        Ok(self.defects.iter().fold(0u8, |acc, &d| acc ^ self.phi[d as usize]))
    }

    /// Explicit correction: peel the spanning forest from the leaves.
    pub fn peel(&mut self, graph: &DecodingGraph) -> Result<Vec<u32>> {
        self.span(graph)?;
        let mut parity = vec![false; graph.num_detectors()];
        for &d in &self.defects {
            parity[d as usize] = true;
        }
        let mut correction = Vec::new();
        for &v in self.order.iter().rev() {
            if !parity[v as usize] {
                continue;
            }
            let e = self.parent_edge[v as usize];
            if e == NONE {
                // An even cluster always leaves its root even.
                return Err(Error::UnfinishedForest);
            }
            correction.push(e);
            parity[v as usize] = false;
            let edge = graph.edge(e);
            let up = if edge.u == v { edge.v } else { edge.u };
            if !graph.is_boundary(up) {
                parity[up as usize] ^= true;
            }
        }
        correction.sort_unstable();
        Ok(correction)
    }

    pub fn num_clusters(&mut self) -> usize {
        let mut roots: Vec<u32> = self.touched.clone();
        for r in roots.iter_mut() {
            *r = self.find(*r);
        }
        roots.sort_unstable();
        roots.dedup();
        roots.len()
    }
}

/// Decode one trial. Allocates a fresh forest; use [`Decoder`] in loops.
pub fn decode(graph: &DecodingGraph, overlay: &ErasureOverlay, defects: &[u32]) -> Result<DecodeResult> {
    Decoder::new(graph).decode(overlay, defects)
}

/// Peeling-based correction for a grown forest.
pub fn peel_correction(forest: &mut ClusterForest, graph: &DecodingGraph) -> Result<Vec<u32>> {
    forest.peel(graph)
}

/// Reusable decoder bound to one graph.
#[derive(Debug, Clone)]
pub struct Decoder<'g> {
    graph: &'g DecodingGraph,
    forest: ClusterForest,
    keep_solid: bool,
}

impl<'g> Decoder<'g> {
    pub fn new(graph: &'g DecodingGraph) -> Self {
        Self { graph, forest: ClusterForest::new(graph), keep_solid: false }
    }

    /// Include the solid edge list in results.
    pub fn with_solid_edges(mut self, on: bool) -> Self {
        self.keep_solid = on;
        self
    }

    pub fn with_trace(mut self, on: bool) -> Self {
        self.forest.set_tracing(on);
        self
    }

    pub fn forest(&self) -> &ClusterForest {
        &self.forest
    }

    pub fn forest_mut(&mut self) -> &mut ClusterForest {
        &mut self.forest
    }

    pub fn decode(&mut self, overlay: &ErasureOverlay, defects: &[u32]) -> Result<DecodeResult> {
        let mask = self.parity(overlay, defects)?;
        Ok(DecodeResult {
            correction: [mask & 1 != 0, mask & 2 != 0],
            clusters: self.forest.num_clusters(),
            growth_rounds: self.forest.growth_rounds,
            solid_edges: self.keep_solid.then(|| self.forest.solid_list.clone()),
        })
    }

    /// Hot path: logical mask of the correction only.
    #[inline]
    pub fn parity(&mut self, overlay: &ErasureOverlay, defects: &[u32]) -> Result<u8> {
        if defects.is_empty() {
            // Nothing to pair; erased edges alone never flip the outcome.
            self.forest.reset();
            self.forest.finished = true;
            return Ok(0);
        }
        self.forest.grow(self.graph, overlay, defects)?;
        self.forest.shortcut_parity(self.graph)
    }

    /// Logical mask obtained by explicit peeling.
    pub fn peel_parity(&mut self, overlay: &ErasureOverlay, defects: &[u32]) -> Result<(u8, Vec<u32>)> {
        self.forest.grow(self.graph, overlay, defects)?;
        let edges = self.forest.peel(self.graph)?;
        let mask = edges.iter().fold(0u8, |acc, &e| acc ^ self.graph.edge(e).logical);
        Ok((mask, edges))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code_model::{build_lattice, build_schedule, CodeConfig};
    use crate::decoding_graph::build_graph;
    use crate::noise::NoiseConfig;

    fn graph(d: usize, cfg: &NoiseConfig) -> DecodingGraph {
        let l = build_lattice(&CodeConfig::new(d).unwrap()).unwrap();
        let s = build_schedule(&l);
        build_graph(&l, &s, cfg).unwrap()
    }

    fn boundary_of(g: &DecodingGraph, defects: &[u32], edges: &[u32]) -> Vec<u32> {
        let mut parity = vec![false; g.num_detectors()];
        for &e in edges {
            let edge = g.edge(e);
            parity[edge.u as usize] ^= true;
            if !g.is_boundary(edge.v) {
                parity[edge.v as usize] ^= true;
            }
        }
        for &d in defects {
            parity[d as usize] ^= true;
        }
        (0..g.num_detectors() as u32).filter(|&v| parity[v as usize]).collect()
    }

    #[test]
    fn empty_input() {
        let g = graph(3, &NoiseConfig::erasure(0.01, 0.0));
        let r = decode(&g, &ErasureOverlay::default(), &[]).unwrap();
        assert_eq!(r.correction, [false, false]);
        let mut forest = ClusterForest::new(&g);
        forest.grow(&g, &ErasureOverlay::default(), &[]).unwrap();
        assert!(peel_correction(&mut forest, &g).unwrap().is_empty());
    }

    #[test]
    fn unknown_vertex() {
        let g = graph(3, &NoiseConfig::erasure(0.01, 0.0));
        let bad = g.num_detectors() as u32;
        assert_eq!(decode(&g, &ErasureOverlay::default(), &[bad]).unwrap_err(), Error::UnknownVertex(bad));
    }

    #[test]
    fn peel_before_growth_fails() {
        let g = graph(3, &NoiseConfig::erasure(0.01, 0.0));
        let mut forest = ClusterForest::new(&g);
        assert_eq!(forest.peel(&g).unwrap_err(), Error::UnfinishedForest);
    }

    /// Two defects joined by a single lightest edge: growth closes exactly
    /// that edge and the correction is that edge alone.
    #[test]
    fn two_adjacent_defects() {
        let g = graph(3, &NoiseConfig::erasure(0.01, 0.0));
        let (id, e) = g
            .edges()
            .iter()
            .enumerate()
            .filter(|(_, e)| !g.is_boundary(e.v))
            .filter(|(_, e)| {
                // both endpoints must have no lighter edge elsewhere
                [e.u, e.v].iter().all(|&x| g.incident(x).iter().all(|&f| g.edge(f).weight >= e.weight))
            })
            .next()
            .unwrap();
        let mut dec = Decoder::new(&g).with_solid_edges(true);
        let r = dec.decode(&ErasureOverlay::default(), &[e.u, e.v]).unwrap();
        assert!(r.solid_edges.as_ref().unwrap().contains(&(id as u32)));
        let (mask, edges) = dec.peel_parity(&ErasureOverlay::default(), &[e.u, e.v]).unwrap();
        assert_eq!(edges, vec![id as u32]);
        assert_eq!(mask, e.logical);
        assert_eq!(r.correction, [e.logical & 1 != 0, e.logical & 2 != 0]);
    }

    #[test]
    fn erased_edge_is_free() {
        let g = graph(5, &NoiseConfig::erasure(0.01, 0.5));
        // Erase an edge that flips a logical and place defects on its ends:
        // the decoder must return that edge's mask without any growth.
        let (id, e) = g.edges().iter().enumerate().find(|(_, e)| e.logical != 0).unwrap();
        let overlay = ErasureOverlay { edges: vec![id as u32] };
        let defects: Vec<u32> = if g.is_boundary(e.v) { vec![e.u] } else { vec![e.u, e.v] };
        let mut dec = Decoder::new(&g);
        let r = dec.decode(&overlay, &defects).unwrap();
        assert_eq!(r.growth_rounds, 0);
        assert_eq!(r.correction, [e.logical & 1 != 0, e.logical & 2 != 0]);
    }

    #[test]
    fn trace_records_rounds() {
        let g = graph(3, &NoiseConfig::erasure(0.01, 0.0));
        let mut dec = Decoder::new(&g).with_trace(true);
        dec.decode(&ErasureOverlay::default(), &[0]).unwrap();
        let lines = dec.forest().trace_lines();
        assert!(!lines.is_empty());
        assert!(lines[0].starts_with("{\"round\":0"));
    }

    #[test]
    fn random_defect_sets_are_neutralised() {
        use rand::{Rng, SeedableRng};
        let g = graph(5, &NoiseConfig::erasure(0.02, 0.5).with_spam(0.01));
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let mut dec = Decoder::new(&g);
        for _ in 0..2_000 {
            let k = rng.gen_range(1..12);
            let mut defects: Vec<u32> = (0..k).map(|_| rng.gen_range(0..g.num_detectors() as u32)).collect();
            defects.sort_unstable();
            defects.dedup();
            let n_over = rng.gen_range(0..6);
            let mut edges: Vec<u32> = (0..n_over).map(|_| rng.gen_range(0..g.edges().len() as u32)).collect();
            edges.sort_unstable();
            edges.dedup();
            let overlay = ErasureOverlay { edges };
            let short = dec.parity(&overlay, &defects).unwrap();
            let (peeled, corr) = dec.peel_parity(&overlay, &defects).unwrap();
            assert_eq!(short, peeled);
            assert!(boundary_of(&g, &defects, &corr).is_empty());
            let solid = dec.forest().solid_edges();
            assert!(corr.iter().all(|e| solid.contains(e)));
        }
    }
}
