//! Linear ordering problem: find an order of the rows/columns of a square
//! matrix that maximizes the sum of entries above the diagonal.

use std::ops::ControlFlow;

use crate::construction::{CandidateList, Constructive};
use crate::core::{Objective, PermutationSolution, Problem, Solution};
use crate::error::{Error, Result};
use crate::local_search::{Move, MoveFamily, MoveKind, Neighborhood};
use crate::path_relinking::{Attribute, RelinkMove, Relinkable};

/// Square cost matrix. The diagonal is stored but never contributes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LopInstance {
    name: String,
    n: usize,
    cost: Vec<i64>,
}

impl LopInstance {
    /// Builds an instance from a row-major `n * n` matrix whose entries fit
    /// in 32 bits.
    pub fn new(name: impl Into<String>, n: usize, entries: Vec<i64>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidConfig(format!(
                "a linear ordering instance needs at least 2 vertices, got {n}"
            )));
        }
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                actual: entries.len(),
            });
        }
        if let Some(bad) = entries
            .iter()
            .find(|&&c| c < i32::MIN as i64 || c > i32::MAX as i64)
        {
            return Err(Error::InvalidConfig(format!(
                "matrix entry {bad} does not fit in 32 bits"
            )));
        }
        Ok(Self {
            name: name.into(),
            n,
            cost: entries,
        })
    }

    pub fn from_rows(name: impl Into<String>, rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidConfig("matrix must be square".into()));
        }
        Self::new(name, n, rows.concat())
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

    #[inline]
    pub fn cost(&self, i: usize, j: usize) -> i64 {
        self.cost[i * self.n + j]
    }

    pub fn entries(&self) -> &[i64] {
        &self.cost
    }

    /// Sum of all off-diagonal entries.
    pub fn off_diagonal_total(&self) -> i64 {
        (0..self.n)
            .flat_map(|i| (0..self.n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| self.cost(i, j))
            .sum()
    }
}

/// Sum of `c[a][b]` over every pair with `a` placed before `b`.
pub fn lop_objective(inst: &LopInstance, order: &[usize]) -> Objective {
    let mut total = 0;
    for (i, &a) in order.iter().enumerate() {
        for &b in &order[i + 1..] {
            total += inst.cost(a, b);
        }
    }
    total
}

/// Objective gain of appending `v` to a partial order.
pub fn lop_attractiveness(inst: &LopInstance, partial: &[usize], v: usize) -> Result<Objective> {
    if v >= inst.n {
        return Err(Error::OutOfRange {
            position: v,
            len: inst.n,
        });
    }
    if partial.contains(&v) {
        return Err(Error::AlreadyPlaced(v));
    }
    Ok(partial.iter().map(|&u| inst.cost(u, v)).sum())
}

fn insert_delta_at(inst: &LopInstance, order: &[usize], from: usize, to: usize) -> Objective {
    let e = order[from];
    if to < from {
        order[to..from]
            .iter()
            .map(|&u| inst.cost(e, u) - inst.cost(u, e))
            .sum()
    } else {
        order[from + 1..=to]
            .iter()
            .map(|&u| inst.cost(u, e) - inst.cost(e, u))
            .sum()
    }
}

fn swap_delta_at(inst: &LopInstance, order: &[usize], i: usize, j: usize) -> Objective {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    if i == j {
        return 0;
    }
    let (a, b) = (order[i], order[j]);
    let mut delta = inst.cost(b, a) - inst.cost(a, b);
    for &m in &order[i + 1..j] {
        delta += inst.cost(m, a) - inst.cost(a, m) + inst.cost(b, m) - inst.cost(m, b);
    }
    delta
}

/// Exact objective change of moving `elem` to index `to_pos`, in
/// `O(|from - to|)`.
pub fn lop_insert_delta(
    inst: &LopInstance,
    solution: &PermutationSolution,
    elem: usize,
    to_pos: usize,
) -> Result<Objective> {
    let n = solution.len();
    if n != inst.n {
        return Err(Error::DimensionMismatch {
            expected: inst.n,
            actual: n,
        });
    }
    if elem >= n {
        return Err(Error::OutOfRange {
            position: elem,
            len: n,
        });
    }
    if to_pos >= n {
        return Err(Error::OutOfRange {
            position: to_pos,
            len: n,
        });
    }
    let order = solution.order();
    let from = order.iter().position(|&v| v == elem).expect("valid permutation");
    Ok(insert_delta_at(inst, order, from, to_pos))
}

/// Exact objective change of exchanging positions `i` and `j`.
pub fn lop_swap_delta(
    inst: &LopInstance,
    solution: &PermutationSolution,
    i: usize,
    j: usize,
) -> Result<Objective> {
    let n = solution.len();
    for p in [i, j] {
        if p >= n {
            return Err(Error::OutOfRange { position: p, len: n });
        }
    }
    Ok(swap_delta_at(inst, solution.order(), i, j))
}

/// Element found at index `k` after moving the element at `from` to `to`.
fn after_insert(order: &[usize], from: usize, to: usize, k: usize) -> usize {
    if from < to {
        if k < from || k > to {
            order[k]
        } else if k == to {
            order[from]
        } else {
            order[k + 1]
        }
    } else if k < to || k > from {
        order[k]
    } else if k == to {
        order[from]
    } else {
        order[k - 1]
    }
}

fn insert_distance_after(
    order: &[usize],
    target: &[usize],
    from: usize,
    to: usize,
    before: usize,
) -> usize {
    let (lo, hi) = if from < to { (from, to) } else { (to, from) };
    let mut d = before;
    for k in lo..=hi {
        if order[k] != target[k] {
            d -= 1;
        }
        if after_insert(order, from, to, k) != target[k] {
            d += 1;
        }
    }
    d
}

fn swap_distance_after(order: &[usize], target: &[usize], i: usize, j: usize, before: usize) -> usize {
    let mut d = before;
    for (k, v) in [(i, order[j]), (j, order[i])] {
        if order[k] != target[k] {
            d -= 1;
        }
        if v != target[k] {
            d += 1;
        }
    }
    d
}

/// Relinking moves from `current` toward `guiding`.
///
/// Each misplaced element may be inserted directly into its position in the
/// guiding order; only insertions that strictly shrink the position-wise
/// distance are kept. When no kept insertion stops short of the guiding
/// solution, swaps that put an element in its guiding position (always
/// distance-reducing) are offered as well.
pub fn lop_pr_candidates(
    inst: &LopInstance,
    current: &PermutationSolution,
    guiding: &PermutationSolution,
) -> Result<Vec<RelinkMove>> {
    if current.len() != guiding.len() || current.len() != inst.n {
        return Err(Error::DimensionMismatch {
            expected: inst.n,
            actual: current.len().min(guiding.len()),
        });
    }
    if current == guiding {
        return Err(Error::IdenticalEndpoints);
    }
    Ok(relink_candidates(inst, current, guiding, MoveFamily::Standard))
}

fn insertion_candidates(
    inst: &LopInstance,
    current: &PermutationSolution,
    guiding: &PermutationSolution,
) -> Vec<RelinkMove> {
    let order = current.order();
    let target = guiding.order();
    let before = current.distance(guiding);
    let pos = current.positions();
    let gpos = guiding.positions();
    let mut out = Vec::new();
    for e in 0..order.len() {
        let (from, to) = (pos[e], gpos[e]);
        if from == to {
            continue;
        }
        let after = insert_distance_after(order, target, from, to, before);
        if after < before {
            out.push(RelinkMove {
                mv: Move {
                    element: e,
                    kind: MoveKind::Insert { from, to },
                    delta: insert_delta_at(inst, order, from, to),
                },
                distance_after: after,
            });
        }
    }
    out
}

fn swap_candidates(
    inst: &LopInstance,
    current: &PermutationSolution,
    guiding: &PermutationSolution,
) -> Vec<RelinkMove> {
    let order = current.order();
    let target = guiding.order();
    let before = current.distance(guiding);
    let pos = current.positions();
    let gpos = guiding.positions();
    let mut out: Vec<RelinkMove> = Vec::new();
    for e in 0..order.len() {
        let (from, to) = (pos[e], gpos[e]);
        if from == to {
            continue;
        }
        let (first, second) = (from.min(to), from.max(to));
        if out
            .iter()
            .any(|m| m.mv.kind == (MoveKind::Swap { first, second }))
        {
            continue;
        }
        out.push(RelinkMove {
            mv: Move {
                element: e,
                kind: MoveKind::Swap { first, second },
                delta: swap_delta_at(inst, order, first, second),
            },
            distance_after: swap_distance_after(order, target, first, second, before),
        });
    }
    out
}

fn relink_candidates(
    inst: &LopInstance,
    current: &PermutationSolution,
    guiding: &PermutationSolution,
    family: MoveFamily,
) -> Vec<RelinkMove> {
    match family {
        MoveFamily::Swap => swap_candidates(inst, current, guiding),
        MoveFamily::Standard => {
            let mut moves = insertion_candidates(inst, current, guiding);
            if !moves.iter().any(|m| m.distance_after > 0) {
                moves.extend(swap_candidates(inst, current, guiding));
            }
            moves
        }
    }
}

impl Problem for LopInstance {
    type Solution = PermutationSolution;

    fn size(&self) -> usize {
        self.n
    }

    fn objective_of(&self, solution: &PermutationSolution) -> Objective {
        lop_objective(self, solution.order())
    }
}

/// Partial order under construction. `gain[v]` is the attractiveness of
/// appending `v`.
#[derive(Clone, Debug)]
pub struct LopPartial {
    order: Vec<usize>,
    placed: Vec<bool>,
    gain: Vec<Objective>,
    value: Objective,
}

impl LopPartial {
    pub fn order(&self) -> &[usize] {
        &self.order
    }
}

impl Constructive for LopInstance {
    type Partial = LopPartial;

    fn start(&self) -> LopPartial {
        LopPartial {
            order: Vec::with_capacity(self.n),
            placed: vec![false; self.n],
            gain: vec![0; self.n],
            value: 0,
        }
    }

    fn is_complete(&self, partial: &LopPartial) -> bool {
        partial.order.len() == self.n
    }

    fn candidates(&self, partial: &LopPartial, out: &mut CandidateList) {
        for v in 0..self.n {
            if !partial.placed[v] {
                out.push(v, partial.gain[v]);
            }
        }
    }

    fn extend(&self, partial: &mut LopPartial, v: usize) {
        debug_assert!(!partial.placed[v]);
        partial.value += partial.gain[v];
        partial.placed[v] = true;
        partial.order.push(v);
        for w in 0..self.n {
            if !partial.placed[w] {
                partial.gain[w] += self.cost(v, w);
            }
        }
    }

    fn finish(&self, partial: LopPartial) -> PermutationSolution {
        let mut s = PermutationSolution::from_order(partial.order).expect("complete order");
        s.set_objective(partial.value);
        s
    }
}

impl Neighborhood for LopInstance {
    type Tracker = ();

    fn tracker(&self, _solution: &PermutationSolution) {}

    fn scan(
        &self,
        solution: &PermutationSolution,
        _tracker: &(),
        family: MoveFamily,
        offset: usize,
        visit: &mut dyn FnMut(Move) -> ControlFlow<()>,
    ) {
        let order = solution.order();
        let n = order.len();
        let pos = solution.positions();
        let mut deltas = vec![0; n];
        for k in 0..n {
            let e = (k + offset) % n;
            let from = pos[e];
            match family {
                MoveFamily::Standard => {
                    let mut acc = 0;
                    for to in (0..from).rev() {
                        let u = order[to];
                        acc += self.cost(e, u) - self.cost(u, e);
                        deltas[to] = acc;
                    }
                    acc = 0;
                    for (to, &u) in order.iter().enumerate().skip(from + 1) {
                        acc += self.cost(u, e) - self.cost(e, u);
                        deltas[to] = acc;
                    }
                    for (to, &delta) in deltas.iter().enumerate() {
                        if to == from {
                            continue;
                        }
                        let mv = Move {
                            element: e,
                            kind: MoveKind::Insert { from, to },
                            delta,
                        };
                        if visit(mv).is_break() {
                            return;
                        }
                    }
                }
                MoveFamily::Swap => {
                    for (q, &other) in order.iter().enumerate() {
                        if other <= e {
                            continue;
                        }
                        let (first, second) = (from.min(q), from.max(q));
                        let mv = Move {
                            element: e,
                            kind: MoveKind::Swap { first, second },
                            delta: swap_delta_at(self, order, first, second),
                        };
                        if visit(mv).is_break() {
                            return;
                        }
                    }
                }
            }
        }
    }

    fn apply(&self, solution: &mut PermutationSolution, _tracker: &mut (), mv: &Move) {
        let before = solution
            .objective()
            .expect("apply requires an evaluated solution");
        match mv.kind {
            MoveKind::Insert { from, to } => solution.insert(from, to),
            MoveKind::Swap { first, second } => solution.swap(first, second),
            MoveKind::Transfer { .. } => panic!("transfer moves do not apply to permutations"),
        }
        solution.set_objective(before + mv.delta);
    }
}

impl Relinkable for LopInstance {
    fn relink_moves(
        &self,
        current: &PermutationSolution,
        _tracker: &(),
        guiding: &PermutationSolution,
        family: MoveFamily,
    ) -> Vec<RelinkMove> {
        relink_candidates(self, current, guiding, family)
    }

    fn attribute_moves(
        &self,
        current: &PermutationSolution,
        _tracker: &(),
        guide: &PermutationSolution,
    ) -> Vec<(Attribute, Move)> {
        let order = current.order();
        let pos = current.positions();
        let gpos = guide.positions();
        (0..order.len())
            .filter(|&e| pos[e] != gpos[e])
            .map(|e| {
                let (from, to) = (pos[e], gpos[e]);
                let mv = Move {
                    element: e,
                    kind: MoveKind::Insert { from, to },
                    delta: insert_delta_at(self, order, from, to),
                };
                ((e, to), mv)
            })
            .collect()
    }
}

#[cfg(test)]
pub(crate) mod tests_support {
    use super::LopInstance;
    use crate::core::RandomStream;
    use rand::Rng;

    /// Random instance with off-diagonal entries in `[0, 99]`.
    pub(crate) fn random_instance(n: usize, rng: &mut RandomStream) -> LopInstance {
        let entries = (0..n * n)
            .map(|k| if k / n == k % n { 0 } else { rng.gen_range(0..100) })
            .collect();
        LopInstance::new("random", n, entries).unwrap()
    }
}
