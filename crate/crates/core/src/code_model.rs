//! Planar XZZX surface code: data/ancilla layout, stabilizers, logical
//! operators and the four-gate syndrome extraction schedule.
//!
//! Data qubits sit on a `d × d` grid at `(row, col)`. Every check is a
//! plaquette identified by its north-west corner `(r, c)` with
//! `-1 <= r, c <= d - 1`; it acts with `X` on its NW and SE corners and with
//! `Z` on its NE and SW corners. Plaquettes are two-coloured by
//! `(r + c) mod 2` (the check *class*). A single-qubit `Z` or `X` error only
//! flips checks of one class, which is what makes the decoding graph split
//! into two independent sub-graphs.

use crate::error::{Error, Result};
use crate::pauli::Pauli;
use serde::{Deserialize, Serialize};

/// Class of boundary checks on the top and bottom edges.
const TOP_BOTTOM_CLASS: u8 = 1;
/// Class of boundary checks on the left and right edges.
const LEFT_RIGHT_CLASS: u8 = 0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeConfig {
    pub distance: usize,
    pub rounds: usize,
}

impl CodeConfig {
    /// Distance-`d` code measured for `d` noisy rounds.
    pub fn new(distance: usize) -> Result<Self> {
        Self::with_rounds(distance, distance)
    }

    pub fn with_rounds(distance: usize, rounds: usize) -> Result<Self> {
        let cfg = Self { distance, rounds };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.distance < 3 || self.distance % 2 == 0 {
            return Err(Error::InvalidDistance(self.distance));
        }
        if self.rounds == 0 {
            return Err(Error::InvalidRounds);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Coord {
    pub row: i32,
    pub col: i32,
}

impl Coord {
    pub fn new(row: i32, col: i32) -> Self {
        Self { row, col }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Corner {
    NW,
    NE,
    SW,
    SE,
}

impl Corner {
    pub const ALL: [Corner; 4] = [Corner::NW, Corner::NE, Corner::SW, Corner::SE];

    fn offset(self) -> (i32, i32) {
        match self {
            Corner::NW => (0, 0),
            Corner::NE => (0, 1),
            Corner::SW => (1, 0),
            Corner::SE => (1, 1),
        }
    }

    /// XZZX leg basis: `X` on the NW–SE diagonal, `Z` on the NE–SW one.
    pub fn basis(self) -> Pauli {
        match self {
            Corner::NW | Corner::SE => Pauli::X,
            Corner::NE | Corner::SW => Pauli::Z,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Leg {
    pub data: usize,
    pub corner: Corner,
    pub basis: Pauli,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stabilizer {
    pub ancilla: usize,
    /// North-west corner of the plaquette.
    pub anchor: Coord,
    pub class: u8,
    pub legs: Vec<Leg>,
}

impl Stabilizer {
    pub fn weight(&self) -> usize {
        self.legs.len()
    }

    /// Pauli acting on `data`, or `I` if the check does not touch it.
    pub fn pauli_on(&self, data: usize) -> Pauli {
        self.legs.iter().find(|l| l.data == data).map_or(Pauli::I, |l| l.basis)
    }
}

/// Which side of the patch a boundary check sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundarySide {
    Top,
    Bottom,
    Left,
    Right,
}

/// A Pauli string on the data qubits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DataPauli {
    pub ops: Vec<Pauli>,
}

impl DataPauli {
    pub fn identity(n: usize) -> Self {
        Self { ops: vec![Pauli::I; n] }
    }

    pub fn anticommutes_with_legs(&self, legs: &[Leg]) -> bool {
        legs.iter().fold(false, |acc, l| acc ^ self.ops[l.data].anticommutes(l.basis))
    }

    pub fn anticommutes(&self, other: &DataPauli) -> bool {
        self.ops.iter().zip(&other.ops).fold(false, |acc, (a, b)| acc ^ a.anticommutes(*b))
    }

    pub fn support(&self) -> impl Iterator<Item = (usize, Pauli)> + '_ {
        self.ops.iter().copied().enumerate().filter(|(_, p)| *p != Pauli::I)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lattice {
    pub distance: usize,
    pub data: Vec<Coord>,
    pub stabilizers: Vec<Stabilizer>,
    /// Logical operator tracking errors detected by class-0 checks (index 0)
    /// and by class-1 checks (index 1).
    pub logicals: [DataPauli; 2],
    /// Boundary sides whose checks belong to each class.
    pub boundary_sides: [[BoundarySide; 2]; 2],
}

impl Lattice {
    pub fn num_data(&self) -> usize {
        self.data.len()
    }

    pub fn num_ancillas(&self) -> usize {
        self.stabilizers.len()
    }

    pub fn num_qubits(&self) -> usize {
        self.num_data() + self.num_ancillas()
    }

    /// Global qubit index of an ancilla (data qubits come first).
    #[inline]
    pub fn ancilla_qubit(&self, ancilla: usize) -> usize {
        self.data.len() + ancilla
    }

    pub fn data_index(&self, row: i32, col: i32) -> Option<usize> {
        let d = self.distance as i32;
        ((0..d).contains(&row) && (0..d).contains(&col)).then(|| (row * d + col) as usize)
    }

    /// Class of the checks that a single-qubit `p ∈ {X, Z}` on `data` flips.
    pub fn detecting_class(&self, data: usize, p: Pauli) -> u8 {
        let c = self.data[data];
        let x_leg_class = (c.row + c.col).rem_euclid(2) as u8;
        match p {
            Pauli::Z => x_leg_class,
            Pauli::X => 1 - x_leg_class,
            _ => panic!("detecting_class expects X or Z"),
        }
    }

    /// The single-qubit Pauli on `data` that only flips checks of `class`.
    pub fn pauli_detected_by(&self, data: usize, class: u8) -> Pauli {
        if self.detecting_class(data, Pauli::Z) == class {
            Pauli::Z
        } else {
            Pauli::X
        }
    }

    pub fn total_check_weight(&self) -> usize {
        self.stabilizers.iter().map(Stabilizer::weight).sum()
    }
}

/// Lay out the planar XZZX patch.
pub fn build_lattice(config: &CodeConfig) -> Result<Lattice> {
    config.validate()?;
    let d = config.distance as i32;
    let mut data = Vec::with_capacity((d * d) as usize);
    for row in 0..d {
        for col in 0..d {
            data.push(Coord::new(row, col));
        }
    }
    let index = |row: i32, col: i32| -> Option<usize> {
        ((0..d).contains(&row) && (0..d).contains(&col)).then(|| (row * d + col) as usize)
    };

    let mut stabilizers = Vec::new();
    for r in -1..d {
        for c in -1..d {
            let class = (r + c).rem_euclid(2) as u8;
            let on_top_bottom = r == -1 || r == d - 1;
            let on_left_right = c == -1 || c == d - 1;
            let keep = match (on_top_bottom, on_left_right) {
                (false, false) => true,
                (true, false) => class == TOP_BOTTOM_CLASS,
                (false, true) => class == LEFT_RIGHT_CLASS,
                (true, true) => false,
            };
            if !keep {
                continue;
            }
            let legs: Vec<Leg> = Corner::ALL
                .iter()
                .filter_map(|&corner| {
                    let (dr, dc) = corner.offset();
                    index(r + dr, c + dc).map(|q| Leg { data: q, corner, basis: corner.basis() })
                })
                .collect();
            debug_assert!(legs.len() == 2 || legs.len() == 4);
            stabilizers.push(Stabilizer { ancilla: stabilizers.len(), anchor: Coord::new(r, c), class, legs });
        }
    }

    let mut lattice = Lattice {
        distance: config.distance,
        data,
        stabilizers,
        logicals: [DataPauli::identity(0), DataPauli::identity(0)],
        boundary_sides: [
            [BoundarySide::Left, BoundarySide::Right],
            [BoundarySide::Top, BoundarySide::Bottom],
        ],
    };
    lattice.logicals = [logical_for_class(&lattice, 0), logical_for_class(&lattice, 1)];
    debug_assert_eq!(LEFT_RIGHT_CLASS, 0);
    Ok(lattice)
}

/// Straight string of the Paulis detected by the *other* class; it commutes
/// with every check and anticommutes with any class-`class` logical error.
fn logical_for_class(lattice: &Lattice, class: u8) -> DataPauli {
    let d = lattice.distance as i32;
    let n = lattice.num_data();
    let candidates: [Vec<usize>; 2] = [
        (0..d).map(|c| (c) as usize).collect(),       // row 0
        (0..d).map(|r| (r * d) as usize).collect(),   // column 0
    ];
    for line in candidates {
        let mut op = DataPauli::identity(n);
        for &q in &line {
            op.ops[q] = lattice.pauli_detected_by(q, 1 - class);
        }
        if lattice.stabilizers.iter().all(|s| !op.anticommutes_with_legs(&s.legs)) {
            return op;
        }
    }
    unreachable!("no straight logical operator for class {class}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateKind {
    Cz,
    Cnot,
}

/// Order in which each check visits its four corners.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum GateOrder {
    /// Class-0 checks visit NW, SW, NE, SE; class-1 checks visit NW, NE, SW,
    /// SE. An ancilla fault midway through a check leaves a two-qubit hook
    /// that the other class detects; this order makes each hook run across
    /// the error strings of that class rather than along them.
    #[default]
    Interleaved,
    /// Every check visits NW, NE, SW, SE.
    Uniform,
    /// Explicit corner order per check class.
    Custom([[Corner; 4]; 2]),
}

impl GateOrder {
    pub fn corners(self, class: u8) -> [Corner; 4] {
        use Corner::*;
        match (self, class) {
            (GateOrder::Interleaved, 0) => [NW, SW, NE, SE],
            (GateOrder::Custom(orders), c) => orders[c as usize & 1],
            _ => [NW, NE, SW, SE],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gate {
    /// Index of the gate within one round, in execution order.
    pub id: usize,
    pub step: usize,
    pub ancilla: usize,
    pub data: usize,
    pub kind: GateKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RoundStep {
    PrepareAncillas,
    Gates(usize),
    MeasureAncillas,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub order: GateOrder,
    /// The six steps of one round.
    pub steps: Vec<RoundStep>,
    /// Gates of the four gate steps, flattened in execution order.
    pub gates: Vec<Gate>,
    /// `gates[step_bounds[k]..step_bounds[k + 1]]` is gate step `k`.
    pub step_bounds: [usize; 5],
}

impl Schedule {
    pub fn gates_per_round(&self) -> usize {
        self.gates.len()
    }

    pub fn gate_step(&self, k: usize) -> &[Gate] {
        &self.gates[self.step_bounds[k]..self.step_bounds[k + 1]]
    }

    /// Whether the gate sequence measures every check of `lattice` and not
    /// some product of them. Two checks that overlap on anticommuting legs
    /// must act on those qubits in the same relative order an even number of
    /// times; otherwise the ancillas pick up each other's operators.
    pub fn measures_checks(&self, lattice: &Lattice) -> bool {
        let mut step = vec![std::collections::HashMap::new(); lattice.num_ancillas()];
        for g in &self.gates {
            if step[g.ancilla].insert(g.data, g.step).is_some() {
                return false;
            }
        }
        let stabs = &lattice.stabilizers;
        for (i, a) in stabs.iter().enumerate() {
            for b in &stabs[i + 1..] {
                let mut first = 0;
                for leg in &a.legs {
                    let pb = b.pauli_on(leg.data);
                    if pb != Pauli::I && pb.anticommutes(leg.basis) {
                        let (sa, sb) = (step[a.ancilla][&leg.data], step[b.ancilla][&leg.data]);
                        if sa == sb {
                            return false;
                        }
                        first += (sa < sb) as usize;
                    }
                }
                if first % 2 == 1 {
                    return false;
                }
            }
        }
        true
    }
}

pub fn build_schedule(lattice: &Lattice) -> Schedule {
    build_schedule_with_order(lattice, GateOrder::default())
}

pub fn build_schedule_with_order(lattice: &Lattice, order: GateOrder) -> Schedule {
    let mut gates = Vec::with_capacity(lattice.total_check_weight());
    let mut step_bounds = [0usize; 5];
    for step in 0..4 {
        for stab in &lattice.stabilizers {
            let corner = order.corners(stab.class)[step];
            if let Some(leg) = stab.legs.iter().find(|l| l.corner == corner) {
                let kind = match leg.basis {
                    Pauli::X => GateKind::Cnot,
                    _ => GateKind::Cz,
                };
                gates.push(Gate { id: gates.len(), step, ancilla: stab.ancilla, data: leg.data, kind });
            }
        }
        step_bounds[step + 1] = gates.len();
    }
    let steps = vec![
        RoundStep::PrepareAncillas,
        RoundStep::Gates(0),
        RoundStep::Gates(1),
        RoundStep::Gates(2),
        RoundStep::Gates(3),
        RoundStep::MeasureAncillas,
    ];
    Schedule { order, steps, gates, step_bounds }
}

/// JSON debug view of a lattice and its schedule.
#[derive(Debug, Serialize)]
pub struct LayoutDump<'a> {
    pub distance: usize,
    pub data: &'a [Coord],
    pub stabilizers: &'a [Stabilizer],
    pub logicals: &'a [DataPauli; 2],
    pub gate_order: GateOrder,
    pub gates: &'a [Gate],
}

pub fn layout_json(lattice: &Lattice, schedule: &Schedule) -> serde_json::Value {
    serde_json::to_value(LayoutDump {
        distance: lattice.distance,
        data: &lattice.data,
        stabilizers: &lattice.stabilizers,
        logicals: &lattice.logicals,
        gate_order: schedule.order,
        gates: &schedule.gates,
    })
    .expect("layout serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lattice(d: usize) -> Lattice {
        build_lattice(&CodeConfig::new(d).unwrap()).unwrap()
    }

    fn check_op(l: &Lattice, s: &Stabilizer) -> DataPauli {
        let mut op = DataPauli::identity(l.num_data());
        for leg in &s.legs {
            op.ops[leg.data] = leg.basis;
        }
        op
    }

    #[test]
    fn rejects_bad_distances() {
        assert_eq!(CodeConfig::new(4), Err(Error::InvalidDistance(4)));
        assert_eq!(CodeConfig::new(1), Err(Error::InvalidDistance(1)));
        assert_eq!(CodeConfig::with_rounds(3, 0), Err(Error::InvalidRounds));
    }

    #[test]
    fn qubit_counts() {
        for d in [3, 5, 7, 9] {
            let l = lattice(d);
            assert_eq!(l.num_data(), d * d);
            assert_eq!(l.num_ancillas(), d * d - 1);
            let bulk = l.stabilizers.iter().filter(|s| s.weight() == 4).count();
            assert_eq!(bulk, (d - 1) * (d - 1));
        }
    }

    #[test]
    fn bulk_checks_are_xzzx() {
        let l = lattice(5);
        for s in l.stabilizers.iter().filter(|s| s.weight() == 4) {
            let pattern: Vec<Pauli> = s.legs.iter().map(|l| l.basis).collect();
            assert_eq!(pattern, vec![Pauli::X, Pauli::Z, Pauli::Z, Pauli::X]);
        }
    }

    #[test]
    fn stabilizers_commute_exhaustively() {
        for d in [3, 5, 7] {
            let l = lattice(d);
            let ops: Vec<DataPauli> = l.stabilizers.iter().map(|s| check_op(&l, s)).collect();
            for a in &ops {
                for b in &ops {
                    assert!(!a.anticommutes(b));
                }
            }
            for q in 0..l.num_data() {
                let touching = l.stabilizers.iter().filter(|s| s.pauli_on(q) != Pauli::I).count();
                assert!(touching <= 4);
            }
        }
    }

    #[test]
    fn stabilizers_are_independent() {
        // Rank over GF(2) of the symplectic check matrix.
        for d in [3, 5, 7] {
            let l = lattice(d);
            let n = l.num_data();
            let mut rows: Vec<Vec<u8>> = l
                .stabilizers
                .iter()
                .map(|s| {
                    let mut v = vec![0u8; 2 * n];
                    for leg in &s.legs {
                        v[leg.data] = leg.basis.has_x() as u8;
                        v[n + leg.data] = leg.basis.has_z() as u8;
                    }
                    v
                })
                .collect();
            let mut rank = 0;
            for col in 0..2 * n {
                if let Some(p) = (rank..rows.len()).find(|&r| rows[r][col] == 1) {
                    rows.swap(rank, p);
                    for r in 0..rows.len() {
                        if r != rank && rows[r][col] == 1 {
                            let pivot = rows[rank].clone();
                            rows[r].iter_mut().zip(&pivot).for_each(|(a, b)| *a ^= b);
                        }
                    }
                    rank += 1;
                }
            }
            assert_eq!(rank, d * d - 1);
        }
    }

    #[test]
    fn logicals_commute_with_checks_and_anticommute_together() {
        for d in [3, 5, 7] {
            let l = lattice(d);
            for lg in &l.logicals {
                for s in &l.stabilizers {
                    assert!(!lg.anticommutes_with_legs(&s.legs));
                }
                assert_eq!(lg.support().count(), d);
            }
            assert!(l.logicals[0].anticommutes(&l.logicals[1]));
        }
    }

    #[test]
    fn single_qubit_errors_split_by_class() {
        let l = lattice(5);
        for q in 0..l.num_data() {
            for p in [Pauli::X, Pauli::Z] {
                let class = l.detecting_class(q, p);
                let flipped: Vec<&Stabilizer> =
                    l.stabilizers.iter().filter(|s| s.pauli_on(q).anticommutes(p)).collect();
                assert!(!flipped.is_empty() && flipped.len() <= 2);
                assert!(flipped.iter().all(|s| s.class == class));
            }
        }
    }

    #[test]
    fn schedule_steps_are_disjoint_and_complete() {
        for order in [GateOrder::Interleaved, GateOrder::Uniform] {
            for d in [3, 5, 7] {
                let l = lattice(d);
                let s = build_schedule_with_order(&l, order);
                assert_eq!(s.gates_per_round(), l.total_check_weight());
                for k in 0..4 {
                    let mut seen = std::collections::HashSet::new();
                    for g in s.gate_step(k) {
                        assert!(seen.insert(l.ancilla_qubit(g.ancilla)));
                        assert!(seen.insert(g.data));
                    }
                }
                for stab in &l.stabilizers {
                    let mut legs: Vec<usize> =
                        s.gates.iter().filter(|g| g.ancilla == stab.ancilla).map(|g| g.data).collect();
                    legs.sort_unstable();
                    let mut expect: Vec<usize> = stab.legs.iter().map(|l| l.data).collect();
                    expect.sort_unstable();
                    assert_eq!(legs, expect);
                }
            }
        }
    }

    #[test]
    fn layout_is_deterministic() {
        let a = lattice(5);
        let b = lattice(5);
        assert_eq!(a, b);
        assert_eq!(build_schedule(&a), build_schedule(&b));
        let json = layout_json(&a, &build_schedule(&a));
        assert_eq!(json["stabilizers"].as_array().unwrap().len(), 24);
    }
}
