//! Weighted MAX-CUT over a two-sided partition of the vertices.

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use crate::construction::{CandidateList, Constructive};
use crate::core::{Objective, PartitionSolution, Problem, Solution};
use crate::error::{Error, Result};
use crate::local_search::{Move, MoveFamily, MoveKind, Neighborhood};
use crate::path_relinking::{Attribute, RelinkMove, Relinkable};

/// Undirected weighted graph. Weights may be negative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxCutInstance {
    name: String,
    n: usize,
    edges: Vec<(usize, usize, i64)>,
    adjacency: Vec<Vec<(usize, i64)>>,
}

impl MaxCutInstance {
    /// Builds the graph; parallel edges are merged by summing their weights
    /// and self-loops are rejected.
    pub fn new(
        name: impl Into<String>,
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize, i64)>,
    ) -> Result<Self> {
        let mut merged: BTreeMap<(usize, usize), i64> = BTreeMap::new();
        for (i, j, w) in edges {
            if i >= n || j >= n {
                return Err(Error::OutOfRange {
                    position: i.max(j),
                    len: n,
                });
            }
            if i == j {
                return Err(Error::InvalidConfig(format!("self-loop on vertex {i}")));
            }
            *merged.entry((i.min(j), i.max(j))).or_insert(0) += w;
        }
        let edges: Vec<(usize, usize, i64)> =
            merged.into_iter().map(|((i, j), w)| (i, j, w)).collect();
        let mut adjacency = vec![Vec::new(); n];
        for &(i, j, w) in &edges {
            adjacency[i].push((j, w));
            adjacency[j].push((i, w));
        }
        Ok(Self {
            name: name.into(),
            n,
            edges,
            adjacency,
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Merged edges with `i < j`, sorted.
    pub fn edges(&self) -> &[(usize, usize, i64)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, i64)] {
        &self.adjacency[v]
    }

    pub fn weighted_degree(&self, v: usize) -> i64 {
        self.adjacency[v].iter().map(|&(_, w)| w).sum()
    }
}

/// Total weight of the edges crossing the partition.
pub fn cut_value(inst: &MaxCutInstance, part: &PartitionSolution) -> Objective {
    let m = part.membership();
    inst.edges
        .iter()
        .filter(|&&(i, j, _)| m[i] != m[j])
        .map(|&(_, _, w)| w)
        .sum()
}

/// Gain of assigning the unassigned vertex `v` to `side` (`true` = S):
/// the weight to already assigned vertices on the opposite side.
pub fn maxcut_attractiveness(
    inst: &MaxCutInstance,
    partial: &[Option<bool>],
    v: usize,
    side: bool,
) -> Result<Objective> {
    if partial.len() != inst.n {
        return Err(Error::DimensionMismatch {
            expected: inst.n,
            actual: partial.len(),
        });
    }
    if v >= inst.n {
        return Err(Error::OutOfRange {
            position: v,
            len: inst.n,
        });
    }
    if partial[v].is_some() {
        return Err(Error::AlreadyPlaced(v));
    }
    Ok(inst.adjacency[v]
        .iter()
        .filter(|&&(u, _)| partial[u] == Some(!side))
        .map(|&(_, w)| w)
        .sum())
}

/// `gain[v]` is the cut change if `v` switches sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GainTable {
    gain: Vec<Objective>,
}

impl GainTable {
    pub fn new(inst: &MaxCutInstance, part: &PartitionSolution) -> Self {
        let m = part.membership();
        let gain = (0..inst.n)
            .map(|v| {
                inst.adjacency[v]
                    .iter()
                    .map(|&(u, w)| if m[u] == m[v] { w } else { -w })
                    .sum()
            })
            .collect();
        Self { gain }
    }

    pub fn gain(&self, v: usize) -> Objective {
        self.gain[v]
    }

    pub fn as_slice(&self) -> &[Objective] {
        &self.gain
    }

    /// Flips `v` in `part` and updates the table in `O(degree(v))`.
    /// The cached objective of `part` is advanced by the old gain when set.
    pub fn apply_flip(&mut self, inst: &MaxCutInstance, part: &mut PartitionSolution, v: usize) {
        let delta = self.gain[v];
        let before = part.objective();
        part.flip(v);
        if let Some(value) = before {
            part.set_objective(value + delta);
        }
        self.gain[v] = -delta;
        let side = part.side(v);
        for &(u, w) in &inst.adjacency[v] {
            if part.side(u) == side {
                self.gain[u] += 2 * w;
            } else {
                self.gain[u] -= 2 * w;
            }
        }
    }
}

/// Cut change from flipping `v`. Debug builds verify that `gains` still
/// matches `part`.
pub fn flip_delta(
    inst: &MaxCutInstance,
    part: &PartitionSolution,
    gains: &GainTable,
    v: usize,
) -> Objective {
    debug_assert_eq!(
        gains,
        &GainTable::new(inst, part),
        "gain table is stale for this partition"
    );
    gains.gain(v)
}

/// Flips that move `current` one step toward `guiding`, with exact deltas.
pub fn maxcut_pr_candidates(
    inst: &MaxCutInstance,
    current: &PartitionSolution,
    guiding: &PartitionSolution,
) -> Result<Vec<(usize, Objective)>> {
    if current.len() != inst.n || guiding.len() != inst.n {
        return Err(Error::DimensionMismatch {
            expected: inst.n,
            actual: current.len().min(guiding.len()),
        });
    }
    if current == guiding {
        return Err(Error::IdenticalEndpoints);
    }
    let gains = GainTable::new(inst, current);
    Ok(current
        .difference(guiding)
        .into_iter()
        .map(|v| (v, gains.gain(v)))
        .collect())
}

impl Problem for MaxCutInstance {
    type Solution = PartitionSolution;

    fn size(&self) -> usize {
        self.n
    }

    fn objective_of(&self, solution: &PartitionSolution) -> Objective {
        cut_value(self, solution)
    }
}

/// Partial assignment under construction.
///
/// Construction candidates are `(vertex, side)` placements encoded as
/// `2 * vertex + side` with side 1 = S.
#[derive(Clone, Debug)]
pub struct MaxCutPartial {
    assignment: Vec<Option<bool>>,
    gain_to_s: Vec<Objective>,
    gain_to_complement: Vec<Objective>,
    assigned: usize,
    value: Objective,
}

impl MaxCutPartial {
    pub fn assignment(&self) -> &[Option<bool>] {
        &self.assignment
    }
}

fn assign(inst: &MaxCutInstance, partial: &mut MaxCutPartial, v: usize, side: bool) {
    debug_assert!(partial.assignment[v].is_none());
    partial.value += if side {
        partial.gain_to_s[v]
    } else {
        partial.gain_to_complement[v]
    };
    partial.assignment[v] = Some(side);
    partial.assigned += 1;
    for &(u, w) in &inst.adjacency[v] {
        if side {
            partial.gain_to_complement[u] += w;
        } else {
            partial.gain_to_s[u] += w;
        }
    }
}

impl Constructive for MaxCutInstance {
    type Partial = MaxCutPartial;

    /// Seeds side S with the vertex of largest total incident weight
    /// (lowest id on ties).
    fn start(&self) -> MaxCutPartial {
        let mut partial = MaxCutPartial {
            assignment: vec![None; self.n],
            gain_to_s: vec![0; self.n],
            gain_to_complement: vec![0; self.n],
            assigned: 0,
            value: 0,
        };
        let seed = (0..self.n).max_by(|&a, &b| {
            self.weighted_degree(a)
                .cmp(&self.weighted_degree(b))
                .then(b.cmp(&a))
        });
        if let Some(v) = seed {
            assign(self, &mut partial, v, true);
        }
        partial
    }

    fn is_complete(&self, partial: &MaxCutPartial) -> bool {
        partial.assigned == self.n
    }

    fn candidates(&self, partial: &MaxCutPartial, out: &mut CandidateList) {
        for v in 0..self.n {
            if partial.assignment[v].is_none() {
                out.push(2 * v, partial.gain_to_complement[v]);
                out.push(2 * v + 1, partial.gain_to_s[v]);
            }
        }
    }

    fn extend(&self, partial: &mut MaxCutPartial, element: usize) {
        assign(self, partial, element / 2, element % 2 == 1);
    }

    fn finish(&self, partial: MaxCutPartial) -> PartitionSolution {
        let membership = partial
            .assignment
            .iter()
            .map(|a| a.expect("complete assignment"))
            .collect();
        let mut s = PartitionSolution::new(membership);
        s.set_objective(partial.value);
        s
    }
}

impl Neighborhood for MaxCutInstance {
    type Tracker = GainTable;

    fn tracker(&self, solution: &PartitionSolution) -> GainTable {
        GainTable::new(self, solution)
    }

    fn scan(
        &self,
        solution: &PartitionSolution,
        gains: &GainTable,
        family: MoveFamily,
        offset: usize,
        visit: &mut dyn FnMut(Move) -> ControlFlow<()>,
    ) {
        let n = self.n;
        match family {
            MoveFamily::Standard => {
                for k in 0..n {
                    let v = (k + offset) % n;
                    let mv = Move {
                        element: v,
                        kind: MoveKind::Transfer { vertex: v },
                        delta: gains.gain(v),
                    };
                    if visit(mv).is_break() {
                        return;
                    }
                }
            }
            MoveFamily::Swap => {
                let mut weight = vec![0; n];
                for k in 0..n {
                    let u = (k + offset) % n;
                    for &(x, w) in &self.adjacency[u] {
                        weight[x] = w;
                    }
                    let mut stop = false;
                    for (v, &w_uv) in weight.iter().enumerate().skip(u + 1) {
                        if solution.side(u) == solution.side(v) {
                            continue;
                        }
                        let mv = Move {
                            element: u,
                            kind: MoveKind::Swap {
                                first: u,
                                second: v,
                            },
                            delta: gains.gain(u) + gains.gain(v) + 2 * w_uv,
                        };
                        if visit(mv).is_break() {
                            stop = true;
                            break;
                        }
                    }
                    for &(x, _) in &self.adjacency[u] {
                        weight[x] = 0;
                    }
                    if stop {
                        return;
                    }
                }
            }
        }
    }

    fn apply(&self, solution: &mut PartitionSolution, gains: &mut GainTable, mv: &Move) {
        assert!(
            solution.objective().is_some(),
            "apply requires an evaluated solution"
        );
        match mv.kind {
            MoveKind::Transfer { vertex } => gains.apply_flip(self, solution, vertex),
            MoveKind::Swap { first, second } => {
                gains.apply_flip(self, solution, first);
                gains.apply_flip(self, solution, second);
            }
            MoveKind::Insert { .. } => panic!("insert moves do not apply to partitions"),
        }
    }

    fn randomized_first_scan(&self) -> bool {
        true
    }
}

impl Relinkable for MaxCutInstance {
    fn relink_moves(
        &self,
        current: &PartitionSolution,
        gains: &GainTable,
        guiding: &PartitionSolution,
        _family: MoveFamily,
    ) -> Vec<RelinkMove> {
        let diff = current.difference(guiding);
        let after = diff.len().saturating_sub(1);
        diff.into_iter()
            .map(|v| RelinkMove {
                mv: Move {
                    element: v,
                    kind: MoveKind::Transfer { vertex: v },
                    delta: gains.gain(v),
                },
                distance_after: after,
            })
            .collect()
    }

    fn exterior_moves(
        &self,
        current: &PartitionSolution,
        gains: &GainTable,
        initiating: &PartitionSolution,
        guiding: &PartitionSolution,
    ) -> Result<Vec<Move>> {
        Ok((0..self.n)
            .filter(|&j| {
                initiating.side(j) == guiding.side(j) && current.side(j) == initiating.side(j)
            })
            .map(|v| Move {
                element: v,
                kind: MoveKind::Transfer { vertex: v },
                delta: gains.gain(v),
            })
            .collect())
    }

    fn attribute_moves(
        &self,
        current: &PartitionSolution,
        gains: &GainTable,
        guide: &PartitionSolution,
    ) -> Vec<(Attribute, Move)> {
        current
            .difference(guide)
            .into_iter()
            .map(|v| {
                let mv = Move {
                    element: v,
                    kind: MoveKind::Transfer { vertex: v },
                    delta: gains.gain(v),
                };
                ((v, guide.side(v) as usize), mv)
            })
            .collect()
    }
}
