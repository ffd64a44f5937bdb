//! Neighborhood descent with first- and best-improving depth.

use std::ops::ControlFlow;

use rand::Rng;

use crate::core::{Objective, Problem, RandomStream, Solution};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MoveKind {
    /// Remove the element at `from` and reinsert it at index `to`.
    Insert { from: usize, to: usize },
    /// Exchange two positions (permutations) or two vertices on opposite
    /// sides (partitions).
    Swap { first: usize, second: usize },
    /// Move one vertex to the other side of the partition.
    Transfer { vertex: usize },
}

/// A neighborhood move together with its exact objective change.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Move {
    /// Element id used for deterministic tie-breaking.
    pub element: usize,
    pub kind: MoveKind,
    pub delta: Objective,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SearchDepth {
    FirstImproving,
    #[default]
    BestImproving,
}

/// Which move family the neighborhood uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum MoveFamily {
    /// Insert for permutations, transfer for partitions.
    #[default]
    Standard,
    Swap,
}

/// Move enumeration over a problem's neighborhoods.
pub trait Neighborhood: Problem {
    /// Per-solution incremental state (e.g. a gain table).
    type Tracker;

    fn tracker(&self, solution: &Self::Solution) -> Self::Tracker;

    /// Visits every move of `family` with its exact delta, in canonical scan
    /// order rotated to begin at `offset` (mod the number of scan units).
    /// The visitor may stop the scan early.
    fn scan(
        &self,
        solution: &Self::Solution,
        tracker: &Self::Tracker,
        family: MoveFamily,
        offset: usize,
        visit: &mut dyn FnMut(Move) -> ControlFlow<()>,
    );

    /// Applies `mv`, keeping the cached objective and tracker consistent.
    /// The solution must carry a cached objective.
    fn apply(&self, solution: &mut Self::Solution, tracker: &mut Self::Tracker, mv: &Move);

    /// Whether first-improving scans start at a random offset each pass.
    fn randomized_first_scan(&self) -> bool {
        false
    }
}

/// Collects every move of the neighborhood, in scan order.
pub fn enumerate_moves<P: Neighborhood>(
    problem: &P,
    solution: &P::Solution,
    family: MoveFamily,
) -> Vec<Move> {
    let tracker = problem.tracker(solution);
    let mut moves = Vec::new();
    problem.scan(solution, &tracker, family, 0, &mut |mv| {
        moves.push(mv);
        ControlFlow::Continue(())
    });
    moves
}

/// Result of a descent.
#[derive(Clone, Debug)]
pub struct Descent<S> {
    pub solution: S,
    pub moves_applied: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct LocalSearch {
    pub depth: SearchDepth,
    pub family: MoveFamily,
}

impl LocalSearch {
    pub fn new(depth: SearchDepth) -> Self {
        Self {
            depth,
            family: MoveFamily::Standard,
        }
    }

    pub fn with_family(mut self, family: MoveFamily) -> Self {
        self.family = family;
        self
    }

    /// Descends until no improving move exists. Best-improving never touches
    /// `rng`.
    pub fn run<P: Neighborhood>(
        &self,
        problem: &P,
        start: P::Solution,
        rng: &mut RandomStream,
    ) -> Descent<P::Solution> {
        let mut solution = start;
        problem.ensure_evaluated(&mut solution);
        let mut tracker = problem.tracker(&solution);
        let n = solution.len().max(1);
        let mut moves_applied = 0;
        loop {
            let mut chosen: Option<Move> = None;
            match self.depth {
                SearchDepth::BestImproving => {
                    problem.scan(&solution, &tracker, self.family, 0, &mut |mv| {
                        if mv.delta > 0 && chosen.is_none_or(|c| mv.delta > c.delta) {
                            chosen = Some(mv);
                        }
                        ControlFlow::Continue(())
                    });
                }
                SearchDepth::FirstImproving => {
                    let offset = if problem.randomized_first_scan() {
                        rng.gen_range(0..n)
                    } else {
                        0
                    };
                    problem.scan(&solution, &tracker, self.family, offset, &mut |mv| {
                        if mv.delta > 0 {
                            chosen = Some(mv);
                            ControlFlow::Break(())
                        } else {
                            ControlFlow::Continue(())
                        }
                    });
                }
            }
            match chosen {
                Some(mv) => {
                    problem.apply(&mut solution, &mut tracker, &mv);
                    moves_applied += 1;
                }
                None => break,
            }
        }
        Descent {
            solution,
            moves_applied,
        }
    }
}

/// Descent over the standard neighborhood of the problem.
pub fn local_search<P: Neighborhood>(
    problem: &P,
    start: P::Solution,
    depth: SearchDepth,
    rng: &mut RandomStream,
) -> P::Solution {
    LocalSearch::new(depth).run(problem, start, rng).solution
}

/// True when no move of `family` improves `solution`.
pub fn is_local_optimum<P: Neighborhood>(
    problem: &P,
    solution: &P::Solution,
    family: MoveFamily,
) -> bool {
    let tracker = problem.tracker(solution);
    let mut improving = false;
    problem.scan(solution, &tracker, family, 0, &mut |mv| {
        if mv.delta > 0 {
            improving = true;
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    !improving
}
