//! Path relinking between solutions: interior walks in every direction,
//! truncated walks, exterior walks and multi-parent walks.

use std::collections::BTreeMap;

use rand::Rng;

use crate::core::{Objective, RandomStream, Solution};
use crate::error::{Error, Result};
use crate::local_search::{LocalSearch, Move, MoveFamily, Neighborhood};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Direction {
    /// Walk from the worse endpoint toward the better one.
    #[default]
    Forward,
    /// Walk from the better endpoint toward the worse one.
    Backward,
    /// A backward walk followed by a forward walk.
    BackAndForward,
    /// Both endpoints walk toward each other, alternating after every step.
    Mixed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum StepSelection {
    /// Best delta, lowest element id on ties.
    #[default]
    Greedy,
    /// Uniform pick among the `rcl_size` best moves.
    GreedyRandomized { rcl_size: usize },
}

/// When intermediate solutions get a local search copy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum InPathLs {
    #[default]
    None,
    All,
    EveryQ(usize),
    BestOnly,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PrConfig {
    pub direction: Direction,
    pub step: StepSelection,
    /// Fraction of the nominal path length walked per segment.
    pub truncation: f64,
    /// Pairs closer than this are not relinked.
    pub min_distance: usize,
    pub in_path_ls: InPathLs,
    pub local_search: LocalSearch,
    /// Steps of an exterior walk; 0 selects interior relinking.
    pub exterior_steps: usize,
    /// `Swap` relinks permutations by exchanges instead of insertions.
    pub family: MoveFamily,
}

impl Default for PrConfig {
    fn default() -> Self {
        Self {
            direction: Direction::Forward,
            step: StepSelection::Greedy,
            truncation: 1.0,
            min_distance: 4,
            in_path_ls: InPathLs::None,
            local_search: LocalSearch::default(),
            exterior_steps: 0,
            family: MoveFamily::Standard,
        }
    }
}

impl PrConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.truncation > 0.0 && self.truncation <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "truncation must lie in (0, 1], got {}",
                self.truncation
            )));
        }
        if let StepSelection::GreedyRandomized { rcl_size: 0 } = self.step {
            return Err(Error::InvalidConfig("rcl size must be at least 1".into()));
        }
        if let InPathLs::EveryQ(0) = self.in_path_ls {
            return Err(Error::InvalidConfig("in-path period must be at least 1".into()));
        }
        Ok(())
    }

    /// Steps allowed in one segment whose nominal length is `full`.
    fn segment_limit(&self, full: usize) -> usize {
        if self.truncation >= 1.0 {
            full
        } else {
            (self.truncation * full as f64).ceil() as usize
        }
    }
}

/// A relinking step together with the distance left to the guide after it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RelinkMove {
    pub mv: Move,
    pub distance_after: usize,
}

/// A solution attribute: `(position, value)` for partitions,
/// `(element, position)` for permutations.
pub type Attribute = (usize, usize);

/// Problems whose solutions can be walked toward (or away from) another.
pub trait Relinkable: Neighborhood {
    /// Moves that strictly shrink the distance from `current` to `guiding`.
    fn relink_moves(
        &self,
        current: &Self::Solution,
        tracker: &Self::Tracker,
        guiding: &Self::Solution,
        family: MoveFamily,
    ) -> Vec<RelinkMove>;

    /// Moves that break an attribute shared by both endpoints and still
    /// held by `current`.
    fn exterior_moves(
        &self,
        _current: &Self::Solution,
        _tracker: &Self::Tracker,
        _initiating: &Self::Solution,
        _guiding: &Self::Solution,
    ) -> Result<Vec<Move>> {
        Err(Error::Unsupported(
            "exterior relinking is only defined for partitions",
        ))
    }

    /// Every attribute of `guide` missing from `current`, with the move that
    /// brings it in.
    fn attribute_moves(
        &self,
        current: &Self::Solution,
        tracker: &Self::Tracker,
        guide: &Self::Solution,
    ) -> Vec<(Attribute, Move)>;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEntry<S> {
    pub solution: S,
    pub objective: Objective,
    /// Distance to the solution being walked toward (or away from, for
    /// exterior walks) right after the step.
    pub distance: usize,
    pub segment: usize,
}

/// Intermediate solutions of one relinking call. Endpoints are not listed.
#[derive(Clone, Debug)]
pub struct PathTrace<S> {
    pub visited: Vec<TraceEntry<S>>,
    /// Earliest entry with the largest objective.
    pub best_index: Option<usize>,
    pub initiating: S,
    pub guiding: S,
    /// Number of steps in each directional segment.
    pub segments: Vec<usize>,
    /// Distance between the walkers (or to the guide) when the walk ended.
    pub final_gap: usize,
    /// The pair was closer than the minimum distance and was not walked.
    pub guard_fired: bool,
}

impl<S: Solution> PathTrace<S> {
    fn new(initiating: S, guiding: S) -> Self {
        Self {
            visited: Vec::new(),
            best_index: None,
            initiating,
            guiding,
            segments: Vec::new(),
            final_gap: 0,
            guard_fired: false,
        }
    }

    pub fn len(&self) -> usize {
        self.visited.len()
    }

    pub fn is_empty(&self) -> bool {
        self.visited.is_empty()
    }

    pub fn best(&self) -> Option<&TraceEntry<S>> {
        self.best_index.map(|i| &self.visited[i])
    }
}

/// Index of the chosen move.
fn select_move(moves: &[Move], step: StepSelection, rng: &mut RandomStream) -> usize {
    debug_assert!(!moves.is_empty());
    match step {
        StepSelection::Greedy => {
            let mut best = 0;
            for (i, m) in moves.iter().enumerate().skip(1) {
                let b = &moves[best];
                if m.delta > b.delta || (m.delta == b.delta && m.element < b.element) {
                    best = i;
                }
            }
            best
        }
        StepSelection::GreedyRandomized { rcl_size } => {
            let mut ranked: Vec<usize> = (0..moves.len()).collect();
            ranked.sort_by(|&a, &b| {
                moves[b]
                    .delta
                    .cmp(&moves[a].delta)
                    .then(moves[a].element.cmp(&moves[b].element))
            });
            ranked.truncate(rcl_size.max(1));
            if ranked.len() == 1 {
                ranked[0]
            } else {
                ranked[rng.gen_range(0..ranked.len())]
            }
        }
    }
}

struct Walker<P: Neighborhood> {
    current: P::Solution,
    tracker: P::Tracker,
}

impl<P: Neighborhood> Walker<P> {
    fn new(problem: &P, start: &P::Solution) -> Self {
        let mut current = start.clone();
        problem.ensure_evaluated(&mut current);
        let tracker = problem.tracker(&current);
        Self { current, tracker }
    }
}

/// Takes one interior step toward `target`. Steps that would land on the
/// target are never taken.
fn step_toward<P: Relinkable>(
    problem: &P,
    walker: &mut Walker<P>,
    target: &P::Solution,
    cfg: &PrConfig,
    rng: &mut RandomStream,
) -> Option<usize> {
    let moves: Vec<RelinkMove> = problem
        .relink_moves(&walker.current, &walker.tracker, target, cfg.family)
        .into_iter()
        .filter(|m| m.distance_after > 0)
        .collect();
    if moves.is_empty() {
        return None;
    }
    let plain: Vec<Move> = moves.iter().map(|m| m.mv).collect();
    let chosen = moves[select_move(&plain, cfg.step, rng)];
    problem.apply(&mut walker.current, &mut walker.tracker, &chosen.mv);
    Some(chosen.distance_after)
}

/// Collects the trace and tracks the best solution seen, including local
/// search copies of intermediates.
struct Recorder<'a, P: Relinkable> {
    problem: &'a P,
    cfg: &'a PrConfig,
    trace: PathTrace<P::Solution>,
    best: P::Solution,
}

impl<'a, P: Relinkable> Recorder<'a, P> {
    fn new(
        problem: &'a P,
        cfg: &'a PrConfig,
        initiating: P::Solution,
        guiding: P::Solution,
        best: P::Solution,
    ) -> Self {
        Self {
            problem,
            cfg,
            trace: PathTrace::new(initiating, guiding),
            best,
        }
    }

    fn offer(&mut self, candidate: &P::Solution) {
        if candidate.objective() > self.best.objective() {
            self.best = candidate.clone();
        }
    }

    fn record(
        &mut self,
        solution: &P::Solution,
        distance: usize,
        segment: usize,
        rng: &mut RandomStream,
    ) {
        let objective = self.problem.objective(solution);
        let idx = self.trace.visited.len();
        let better = self
            .trace
            .best()
            .is_none_or(|b| objective > b.objective);
        self.trace.visited.push(TraceEntry {
            solution: solution.clone(),
            objective,
            distance,
            segment,
        });
        if better {
            self.trace.best_index = Some(idx);
        }
        self.offer(solution);
        let improve = match self.cfg.in_path_ls {
            InPathLs::All => true,
            InPathLs::EveryQ(q) => (idx + 1).is_multiple_of(q),
            InPathLs::None | InPathLs::BestOnly => false,
        };
        if improve {
            let out = self
                .cfg
                .local_search
                .run(self.problem, solution.clone(), rng)
                .solution;
            self.offer(&out);
        }
    }

    fn finish(mut self, rng: &mut RandomStream) -> (P::Solution, PathTrace<P::Solution>) {
        if self.cfg.in_path_ls == InPathLs::BestOnly {
            if let Some(entry) = self.trace.best() {
                let start = entry.solution.clone();
                let out = self.cfg.local_search.run(self.problem, start, rng).solution;
                self.offer(&out);
            }
        }
        (self.best, self.trace)
    }
}

fn evaluated<P: Neighborhood>(problem: &P, s: &P::Solution) -> P::Solution {
    let mut s = s.clone();
    problem.ensure_evaluated(&mut s);
    s
}

/// One directional walk from `from` toward `to`, at most `limit` steps.
fn walk_segment<P: Relinkable>(
    rec: &mut Recorder<'_, P>,
    from: &P::Solution,
    to: &P::Solution,
    limit: usize,
    segment: usize,
    rng: &mut RandomStream,
) -> usize {
    let problem = rec.problem;
    let cfg = *rec.cfg;
    let mut walker = Walker::new(problem, from);
    let mut steps = 0;
    let mut gap = from.distance(to);
    while steps < limit {
        match step_toward(problem, &mut walker, to, &cfg, rng) {
            Some(d) => {
                gap = d;
                steps += 1;
                let snapshot = walker.current.clone();
                rec.record(&snapshot, d, segment, rng);
            }
            None => break,
        }
    }
    rec.trace.segments.push(steps);
    gap
}

/// Both endpoints walk toward each other, alternating after every step.
fn walk_mixed<P: Relinkable>(
    rec: &mut Recorder<'_, P>,
    initiating: &P::Solution,
    guiding: &P::Solution,
    limit: usize,
    rng: &mut RandomStream,
) -> usize {
    let problem = rec.problem;
    let cfg = *rec.cfg;
    let mut walkers = [Walker::new(problem, initiating), Walker::new(problem, guiding)];
    let mut steps = [0usize; 2];
    let mut gap = initiating.distance(guiding);
    let mut side = 0;
    while steps[side] < limit {
        let (left, right) = walkers.split_at_mut(1);
        let (mover, other) = if side == 0 {
            (&mut left[0], &right[0])
        } else {
            (&mut right[0], &left[0])
        };
        match step_toward(problem, mover, &other.current, &cfg, rng) {
            Some(d) => {
                gap = d;
                steps[side] += 1;
                let snapshot = mover.current.clone();
                rec.record(&snapshot, d, side, rng);
            }
            None => break,
        }
        side = 1 - side;
    }
    rec.trace.segments.extend(steps);
    gap
}

/// Relinks `s` and `t` and returns the best solution found (endpoints
/// included) together with the trace.
pub fn relink<P: Relinkable>(
    problem: &P,
    s: &P::Solution,
    t: &P::Solution,
    cfg: &PrConfig,
    rng: &mut RandomStream,
) -> Result<(P::Solution, PathTrace<P::Solution>)> {
    cfg.validate()?;
    let (_, distance) = crate::core::symmetric_difference(s, t)?;
    if distance == 0 {
        return Err(Error::IdenticalEndpoints);
    }
    let s = evaluated(problem, s);
    let t = evaluated(problem, t);
    // Forward orientation: worse endpoint first, `s` on ties.
    let (worse, better) = if t.objective() < s.objective() {
        (t, s)
    } else {
        (s, t)
    };
    let best_endpoint = better.clone();
    let (initiating, guiding) = match cfg.direction {
        Direction::Backward => (better, worse),
        _ => (worse, better),
    };
    let mut rec = Recorder::new(
        problem,
        cfg,
        initiating.clone(),
        guiding.clone(),
        best_endpoint,
    );
    if distance < cfg.min_distance {
        rec.trace.guard_fired = true;
        rec.trace.final_gap = distance;
        return Ok(rec.finish(rng));
    }
    let limit = cfg.segment_limit(distance - 1);
    let gap = match cfg.direction {
        Direction::Forward | Direction::Backward => {
            walk_segment(&mut rec, &initiating, &guiding, limit, 0, rng)
        }
        Direction::BackAndForward => {
            walk_segment(&mut rec, &guiding, &initiating, limit, 0, rng);
            walk_segment(&mut rec, &initiating, &guiding, limit, 1, rng)
        }
        Direction::Mixed => {
            let half = if cfg.truncation >= 1.0 {
                usize::MAX
            } else {
                cfg.segment_limit(distance - 1).div_ceil(2)
            };
            walk_mixed(&mut rec, &initiating, &guiding, half, rng)
        }
    };
    rec.trace.final_gap = gap;
    Ok(rec.finish(rng))
}

/// Walks away from both endpoints by breaking attributes they share,
/// starting from `s`.
pub fn exterior_relink<P: Relinkable>(
    problem: &P,
    s: &P::Solution,
    t: &P::Solution,
    steps: usize,
    cfg: &PrConfig,
    rng: &mut RandomStream,
) -> Result<(P::Solution, PathTrace<P::Solution>)> {
    cfg.validate()?;
    let (_, distance) = crate::core::symmetric_difference(s, t)?;
    if distance == 0 {
        return Err(Error::IdenticalEndpoints);
    }
    if steps == 0 {
        return Err(Error::InvalidConfig("exterior walk needs at least one step".into()));
    }
    let s = evaluated(problem, s);
    let t = evaluated(problem, t);
    let start = if t.objective() > s.objective() {
        t.clone()
    } else {
        s.clone()
    };
    let mut rec = Recorder::new(problem, cfg, s.clone(), t.clone(), start);
    let mut walker = Walker::new(problem, &s);
    let mut taken = 0;
    while taken < steps {
        let moves = problem.exterior_moves(&walker.current, &walker.tracker, &s, &t)?;
        if moves.is_empty() {
            break;
        }
        let chosen = moves[select_move(&moves, cfg.step, rng)];
        problem.apply(&mut walker.current, &mut walker.tracker, &chosen);
        taken += 1;
        let snapshot = walker.current.clone();
        rec.record(&snapshot, snapshot.distance(&t), 0, rng);
    }
    rec.trace.segments.push(taken);
    rec.trace.final_gap = walker.current.distance(&t);
    Ok(rec.finish(rng))
}

/// Walks from `s` by repeatedly importing the attribute held by the most
/// guides. Stops after `max_steps`, when no guide attribute is missing, or
/// when the walk reaches one of the guides (that solution is not recorded).
pub fn multi_parent_relink<P: Relinkable>(
    problem: &P,
    s: &P::Solution,
    guides: &[P::Solution],
    max_steps: usize,
    cfg: &PrConfig,
    rng: &mut RandomStream,
) -> Result<(P::Solution, PathTrace<P::Solution>)> {
    cfg.validate()?;
    let first = guides.first().ok_or(Error::NoGuides)?;
    for g in guides {
        crate::core::symmetric_difference(s, g)?;
    }
    let s = evaluated(problem, s);
    let mut best = s.clone();
    for g in guides {
        let g = evaluated(problem, g);
        if g.objective() > best.objective() {
            best = g;
        }
    }
    let mut rec = Recorder::new(problem, cfg, s.clone(), first.clone(), best);
    let mut walker = Walker::new(problem, &s);
    let mut taken = 0;
    while taken < max_steps {
        let mut counts: BTreeMap<Attribute, (usize, Move)> = BTreeMap::new();
        for g in guides {
            for (attr, mv) in problem.attribute_moves(&walker.current, &walker.tracker, g) {
                counts.entry(attr).or_insert((0, mv)).0 += 1;
            }
        }
        let Some(top) = counts.values().map(|&(c, _)| c).max() else {
            break;
        };
        let moves: Vec<Move> = counts
            .values()
            .filter(|&&(c, _)| c == top)
            .map(|&(_, mv)| mv)
            .collect();
        let chosen = moves[select_move(&moves, cfg.step, rng)];
        problem.apply(&mut walker.current, &mut walker.tracker, &chosen);
        taken += 1;
        if guides.contains(&walker.current) {
            break;
        }
        let snapshot = walker.current.clone();
        let nearest = guides.iter().map(|g| snapshot.distance(g)).min().unwrap_or(0);
        rec.record(&snapshot, nearest, 0, rng);
    }
    rec.trace.segments.push(rec.trace.visited.len());
    rec.trace.final_gap = guides
        .iter()
        .map(|g| walker.current.distance(g))
        .min()
        .unwrap_or(0);
    Ok(rec.finish(rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::{PartitionSolution, PermutationSolution, Problem};
    use crate::local_search::SearchDepth;
    use crate::lop::LopInstance;
    use crate::maxcut::MaxCutInstance;
    use proptest::prelude::*;
    use rand::{Rng, RngCore};

    fn bits(s: &str) -> PartitionSolution {
        PartitionSolution::from_bits(s).unwrap()
    }

    fn perm(v: &[usize]) -> PermutationSolution {
        PermutationSolution::from_order(v.to_vec()).unwrap()
    }

    fn path_graph(n: usize) -> MaxCutInstance {
        MaxCutInstance::new("path", n, (0..n - 1).map(|i| (i, i + 1, (i % 3) as i64 + 1))).unwrap()
    }

    /// Inserting element 2 first is the best opening move, and the walk back
    /// from the other end prefers moving element 3 to the end.
    fn crafted_lop() -> LopInstance {
        let mut rows = vec![vec![0; 4]; 4];
        rows[2][0] = 10;
        rows[2][1] = 10;
        rows[1][3] = 5;
        LopInstance::from_rows("crafted", &rows).unwrap()
    }

    fn no_guard() -> PrConfig {
        PrConfig {
            min_distance: 0,
            ..PrConfig::default()
        }
    }

    #[test]
    fn full_partition_path_has_distance_minus_one_intermediates() {
        let g = path_graph(4);
        let mut rng = RandomStream::new(1);
        let (_, trace) = relink(&g, &bits("0000"), &bits("1111"), &PrConfig::default(), &mut rng).unwrap();
        assert_eq!(trace.len(), 3);
        assert_eq!(trace.final_gap, 1);
        let d: Vec<usize> = trace.visited.iter().map(|e| e.distance).collect();
        assert_eq!(d, vec![3, 2, 1]);
    }

    #[test]
    fn forward_greedy_first_step_on_worked_example() {
        let inst = crafted_lop();
        let s = perm(&[0, 1, 2, 3]);
        let t = perm(&[2, 3, 1, 0]);
        // s must be the worse endpoint so it initiates a forward walk.
        assert!(inst.objective(&s) < inst.objective(&t));
        let mut rng = RandomStream::new(0);
        let (_, trace) = relink(&inst, &s, &t, &no_guard(), &mut rng).unwrap();
        assert_eq!(trace.visited[0].solution, perm(&[2, 0, 1, 3]));
        // The repaired element stays in place for the rest of the walk.
        assert!(trace.visited.iter().all(|e| e.solution.order()[0] == 2));
    }

    #[test]
    fn mixed_walk_stops_when_no_move_shrinks_the_gap() {
        let inst = crafted_lop();
        let cfg = PrConfig {
            direction: Direction::Mixed,
            ..no_guard()
        };
        let mut rng = RandomStream::new(0);
        let (_, trace) =
            relink(&inst, &perm(&[0, 1, 2, 3]), &perm(&[2, 3, 1, 0]), &cfg, &mut rng).unwrap();
        assert_eq!(trace.visited[0].solution, perm(&[2, 0, 1, 3]));
        assert_eq!(trace.visited[0].segment, 0);
        assert_eq!(trace.len(), 1);
        assert_eq!(trace.final_gap, 2);
    }

    #[test]
    fn guard_fires_below_minimum_distance() {
        let g = path_graph(5);
        let mut rng = RandomStream::new(0);
        let (best, trace) =
            relink(&g, &bits("00000"), &bits("11100"), &PrConfig::default(), &mut rng).unwrap();
        assert!(trace.guard_fired);
        assert!(trace.is_empty());
        let better = [bits("00000"), bits("11100")]
            .into_iter()
            .max_by_key(|s| g.objective(s))
            .unwrap();
        assert_eq!(best, better);

        let (_, trace) =
            relink(&g, &bits("00000"), &bits("11110"), &PrConfig::default(), &mut rng).unwrap();
        assert!(!trace.guard_fired);
        assert_eq!(trace.len(), 3);
    }

    #[test]
    fn identical_or_mismatched_endpoints_are_rejected() {
        let g = path_graph(4);
        let mut rng = RandomStream::new(0);
        assert!(matches!(
            relink(&g, &bits("0101"), &bits("0101"), &no_guard(), &mut rng),
            Err(Error::IdenticalEndpoints)
        ));
        assert!(relink(&g, &bits("0101"), &bits("01011"), &no_guard(), &mut rng).is_err());
    }

    #[test]
    fn directions_pick_the_expected_initiating_solution() {
        let g = path_graph(6);
        let a = bits("000000");
        let b = bits("101010");
        assert!(g.objective(&a) < g.objective(&b));
        let mut rng = RandomStream::new(0);
        let fwd = relink(&g, &b, &a, &PrConfig::default(), &mut rng).unwrap().1;
        assert_eq!(fwd.initiating, a);
        let cfg = PrConfig {
            direction: Direction::Backward,
            ..PrConfig::default()
        };
        let bwd = relink(&g, &a, &b, &cfg, &mut rng).unwrap().1;
        assert_eq!(bwd.initiating, b);
    }

    #[test]
    fn back_and_forward_concatenates_both_walks() {
        let g = path_graph(8);
        let a = bits("00000000");
        let b = bits("11011011");
        let mut rng = RandomStream::new(3);
        let run = |direction, rng: &mut RandomStream| {
            let cfg = PrConfig {
                direction,
                ..PrConfig::default()
            };
            relink(&g, &a, &b, &cfg, rng).unwrap().1
        };
        let bf = run(Direction::BackAndForward, &mut rng);
        let fwd = run(Direction::Forward, &mut rng);
        let bwd = run(Direction::Backward, &mut rng);
        assert_eq!(bf.len(), fwd.len() + bwd.len());
        assert_eq!(bf.segments, vec![bwd.len(), fwd.len()]);
    }

    #[test]
    fn truncation_limits_each_segment() {
        let g = path_graph(8);
        let cfg = PrConfig {
            truncation: 0.5,
            ..PrConfig::default()
        };
        let mut rng = RandomStream::new(0);
        let (_, trace) = relink(&g, &bits("00000000"), &bits("11111111"), &cfg, &mut rng).unwrap();
        // L = 7, ceil(3.5) = 4.
        assert_eq!(trace.len(), 4);
        let cfg = PrConfig {
            direction: Direction::BackAndForward,
            ..cfg
        };
        let (_, trace) = relink(&g, &bits("00000000"), &bits("11111111"), &cfg, &mut rng).unwrap();
        assert_eq!(trace.segments, vec![4, 4]);
    }

    #[test]
    fn greedy_consumes_no_randomness_and_rcl_of_one_matches_it() {
        let mut rng = RandomStream::new(77);
        let g = crate::maxcut::tests_support::random_graph(14, 0.5, &mut rng);
        let a = PartitionSolution::new((0..14).map(|_| rng.gen_bool(0.5)).collect());
        let b = a.complement();
        let greedy = PrConfig::default();
        let grpr1 = PrConfig {
            step: StepSelection::GreedyRandomized { rcl_size: 1 },
            ..greedy
        };
        let mut r1 = RandomStream::new(5);
        let mut r2 = RandomStream::new(5);
        let (b1, t1) = relink(&g, &a, &b, &greedy, &mut r1).unwrap();
        let (b2, t2) = relink(&g, &a, &b, &grpr1, &mut r2).unwrap();
        assert_eq!(b1, b2);
        assert_eq!(t1.visited, t2.visited);
        assert_eq!(r1.next_u64(), RandomStream::new(5).next_u64());
        assert_eq!(r2.next_u64(), RandomStream::new(5).next_u64());
    }

    #[test]
    fn best_is_at_least_both_endpoints_and_every_intermediate() {
        let mut rng = RandomStream::new(21);
        let g = crate::maxcut::tests_support::random_graph(12, 0.5, &mut rng);
        for policy in [InPathLs::None, InPathLs::All, InPathLs::EveryQ(2), InPathLs::BestOnly] {
            let cfg = PrConfig {
                in_path_ls: policy,
                step: StepSelection::GreedyRandomized { rcl_size: 3 },
                direction: Direction::Mixed,
                local_search: LocalSearch::new(SearchDepth::FirstImproving),
                ..PrConfig::default()
            };
            for _ in 0..30 {
                let a = PartitionSolution::new((0..12).map(|_| rng.gen_bool(0.5)).collect());
                let b = PartitionSolution::new((0..12).map(|_| rng.gen_bool(0.5)).collect());
                if a == b {
                    continue;
                }
                let (best, trace) = relink(&g, &a, &b, &cfg, &mut rng).unwrap();
                let fb = best.objective().unwrap();
                assert_eq!(fb, g.objective_of(&best));
                assert!(fb >= g.objective(&a) && fb >= g.objective(&b));
                assert!(trace.visited.iter().all(|e| e.objective <= fb));
                if let Some(top) = trace.best() {
                    let max = trace.visited.iter().map(|e| e.objective).max().unwrap();
                    assert_eq!(top.objective, max);
                    let first = trace.visited.iter().position(|e| e.objective == max);
                    assert_eq!(trace.best_index, first);
                }
            }
        }
    }

    #[test]
    fn in_path_local_search_does_not_redirect_the_walk() {
        let mut rng = RandomStream::new(4);
        let g = crate::maxcut::tests_support::random_graph(10, 0.6, &mut rng);
        let a = bits("0000000000");
        let b = bits("1111111111");
        let plain = relink(&g, &a, &b, &PrConfig::default(), &mut RandomStream::new(1))
            .unwrap()
            .1;
        let cfg = PrConfig {
            in_path_ls: InPathLs::All,
            ..PrConfig::default()
        };
        let with_ls = relink(&g, &a, &b, &cfg, &mut RandomStream::new(1)).unwrap().1;
        assert_eq!(plain.visited, with_ls.visited);
    }

    #[test]
    fn exterior_step_examples() {
        let g = path_graph(4);
        let mut rng = RandomStream::new(0);
        let (_, trace) =
            exterior_relink(&g, &bits("0011"), &bits("0111"), 1, &PrConfig::default(), &mut rng)
                .unwrap();
        assert_eq!(trace.len(), 1);
        let step = &trace.visited[0].solution;
        assert_eq!(step.distance(&bits("0111")), 2);
        assert_eq!(step.distance(&bits("0011")), 1);
        assert!(!step.side(1));

        let (_, trace) =
            exterior_relink(&g, &bits("0011"), &bits("0111"), 10, &PrConfig::default(), &mut rng)
                .unwrap();
        assert_eq!(trace.len(), 3);
        assert_eq!(trace.final_gap, 4);
    }

    #[test]
    fn exterior_relinking_is_unsupported_for_permutations() {
        let inst = crafted_lop();
        let mut rng = RandomStream::new(0);
        assert!(matches!(
            exterior_relink(
                &inst,
                &perm(&[0, 1, 2, 3]),
                &perm(&[1, 0, 2, 3]),
                2,
                &PrConfig::default(),
                &mut rng
            ),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn multi_parent_prefers_the_most_frequent_attribute() {
        let g = MaxCutInstance::new("empty", 4, []).unwrap();
        let guides = [bits("1100"), bits("1010")];
        let mut rng = RandomStream::new(0);
        let (_, trace) =
            multi_parent_relink(&g, &bits("0000"), &guides, 1, &PrConfig::default(), &mut rng)
                .unwrap();
        assert_eq!(trace.visited[0].solution, bits("1000"));
    }

    #[test]
    fn multi_parent_with_one_guide_matches_interior_candidates() {
        let mut rng = RandomStream::new(9);
        let g = crate::maxcut::tests_support::random_graph(8, 0.5, &mut rng);
        let cur = bits("00110101");
        let guide = bits("10011100");
        let tracker = g.tracker(&cur);
        let mut interior: Vec<Move> = g
            .relink_moves(&cur, &tracker, &guide, MoveFamily::Standard)
            .into_iter()
            .map(|m| m.mv)
            .collect();
        let mut attrs: Vec<Move> = g
            .attribute_moves(&cur, &tracker, &guide)
            .into_iter()
            .map(|(_, m)| m)
            .collect();
        interior.sort_by_key(|m| m.element);
        attrs.sort_by_key(|m| m.element);
        assert_eq!(interior, attrs);
    }

    #[test]
    fn multi_parent_edge_cases() {
        let g = path_graph(4);
        let mut rng = RandomStream::new(0);
        let cur = bits("0110");
        let (best, trace) =
            multi_parent_relink(&g, &cur, &[cur.clone(), cur.clone()], 5, &PrConfig::default(), &mut rng)
                .unwrap();
        assert!(trace.is_empty());
        assert_eq!(best, cur);
        assert!(matches!(
            multi_parent_relink(&g, &cur, &[], 5, &PrConfig::default(), &mut rng),
            Err(Error::NoGuides)
        ));
    }

    #[test]
    fn invalid_configs_are_rejected() {
        for cfg in [
            PrConfig { truncation: 0.0, ..PrConfig::default() },
            PrConfig { truncation: 1.5, ..PrConfig::default() },
            PrConfig { in_path_ls: InPathLs::EveryQ(0), ..PrConfig::default() },
            PrConfig { step: StepSelection::GreedyRandomized { rcl_size: 0 }, ..PrConfig::default() },
        ] {
            assert!(cfg.validate().is_err());
        }
    }

    proptest! {
        #[test]
        fn partition_paths_visit_distance_minus_one(
            a in proptest::collection::vec(any::<bool>(), 10),
            b in proptest::collection::vec(any::<bool>(), 10),
            seed in any::<u64>(),
        ) {
            let (a, b) = (PartitionSolution::new(a), PartitionSolution::new(b));
            prop_assume!(a != b);
            let g = path_graph(10);
            let d = a.distance(&b);
            let cfg = PrConfig {
                min_distance: 0,
                step: StepSelection::GreedyRandomized { rcl_size: 3 },
                ..PrConfig::default()
            };
            let (_, trace) = relink(&g, &a, &b, &cfg, &mut RandomStream::new(seed)).unwrap();
            prop_assert_eq!(trace.len(), d - 1);
            for (k, e) in trace.visited.iter().enumerate() {
                prop_assert_eq!(e.distance, d - 1 - k);
            }
        }
    }
}
