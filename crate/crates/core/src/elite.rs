//! Fixed-capacity pool of good, mutually different solutions.

use std::collections::HashSet;
use std::io::Write;

use rand::Rng;

use crate::core::{Objective, RandomStream, Solution};
use crate::error::{Error, Result};

/// Default diversity threshold for solutions with `n` positions: 5% of `n`,
/// rounded up.
pub fn default_threshold(n: usize) -> usize {
    n.div_ceil(20)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum GuidePolicy {
    #[default]
    Uniform,
    /// Probability proportional to the distance from the reference solution.
    ProportionalDelta,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RejectReason {
    /// Identical to a member.
    Duplicate,
    /// Not better than the worst member of a full pool.
    Quality,
    /// Too close to existing members.
    Diversity,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Admission<S> {
    Added { evicted: Option<S> },
    Rejected(RejectReason),
}

impl<S> Admission<S> {
    pub fn is_added(&self) -> bool {
        matches!(self, Admission::Added { .. })
    }
}

#[derive(Clone, Debug)]
pub struct Member<S> {
    /// Unique for the lifetime of the pool; used for pair bookkeeping.
    pub id: u64,
    pub solution: S,
    pub objective: Objective,
}

#[derive(Clone, Debug)]
pub struct EliteSet<S> {
    capacity: usize,
    threshold: usize,
    members: Vec<Member<S>>,
    next_id: u64,
    relinked: HashSet<(u64, u64)>,
}

fn pair_key(a: u64, b: u64) -> (u64, u64) {
    (a.min(b), a.max(b))
}

impl<S: Solution> EliteSet<S> {
    pub fn new(capacity: usize, threshold: usize) -> Result<Self> {
        if capacity == 0 {
            return Err(Error::InvalidConfig("elite capacity must be at least 1".into()));
        }
        Ok(Self {
            capacity,
            threshold,
            members: Vec::with_capacity(capacity),
            next_id: 0,
            relinked: HashSet::new(),
        })
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn threshold(&self) -> usize {
        self.threshold
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.members.len() >= self.capacity
    }

    pub fn members(&self) -> &[Member<S>] {
        &self.members
    }

    pub fn best(&self) -> Option<&Member<S>> {
        self.members.iter().max_by(|a, b| {
            a.objective.cmp(&b.objective).then(b.id.cmp(&a.id))
        })
    }

    pub fn worst(&self) -> Option<&Member<S>> {
        self.members.iter().min_by_key(|m| m.objective)
    }

    /// Removes every member and all pair bookkeeping.
    pub fn clear(&mut self) {
        self.members.clear();
        self.relinked.clear();
    }

    fn fresh_member(&mut self, solution: S, objective: Objective) -> Member<S> {
        let id = self.next_id;
        self.next_id += 1;
        Member {
            id,
            solution,
            objective,
        }
    }

    fn replace_at(&mut self, index: usize, solution: S, objective: Objective) -> S {
        let fresh = self.fresh_member(solution, objective);
        let old = std::mem::replace(&mut self.members[index], fresh);
        self.relinked.retain(|&(a, b)| a != old.id && b != old.id);
        old.solution
    }

    /// Offers `s` to the pool. `s` must carry a cached objective.
    ///
    /// While the pool is filling up, `s` is admitted when it is at least the
    /// diversity threshold away from every member; a candidate too close to
    /// exactly one member replaces it when strictly better. Once full, `s`
    /// is admitted when it beats the best member, or when it beats the worst
    /// member and respects the threshold. It then replaces the most similar
    /// member among those it beats.
    pub fn try_add(&mut self, s: S) -> Admission<S> {
        let f = s
            .objective()
            .expect("elite candidates must be evaluated");
        let distances: Vec<usize> = self.members.iter().map(|m| m.solution.distance(&s)).collect();
        if distances.contains(&0) {
            return Admission::Rejected(RejectReason::Duplicate);
        }
        if !self.is_full() {
            let limit = self.threshold.max(1);
            let near: Vec<usize> = (0..distances.len()).filter(|&i| distances[i] < limit).collect();
            return match near.as_slice() {
                [] => {
                    let m = self.fresh_member(s, f);
                    self.members.push(m);
                    Admission::Added { evicted: None }
                }
                &[i] if f > self.members[i].objective => {
                    let old = self.replace_at(i, s, f);
                    Admission::Added { evicted: Some(old) }
                }
                _ => Admission::Rejected(RejectReason::Diversity),
            };
        }
        let best = self.members.iter().map(|m| m.objective).max().unwrap_or(f);
        let worst = self.members.iter().map(|m| m.objective).min().unwrap_or(f);
        let min_distance = distances.iter().copied().min().unwrap_or(usize::MAX);
        if f <= worst {
            return Admission::Rejected(RejectReason::Quality);
        }
        if f <= best && min_distance < self.threshold {
            return Admission::Rejected(RejectReason::Diversity);
        }
        let victim = eviction_index(&self.members, &distances, f)
            .expect("a worse member exists when f beats the worst");
        let old = self.replace_at(victim, s, f);
        Admission::Added { evicted: Some(old) }
    }

    /// Picks a guiding solution for `s`.
    pub fn select_guide(
        &self,
        s: &S,
        policy: GuidePolicy,
        rng: &mut RandomStream,
    ) -> Result<&S> {
        if self.members.is_empty() {
            return Err(Error::EmptyEliteSet);
        }
        match policy {
            GuidePolicy::Uniform => {
                let i = if self.members.len() == 1 {
                    0
                } else {
                    rng.gen_range(0..self.members.len())
                };
                Ok(&self.members[i].solution)
            }
            GuidePolicy::ProportionalDelta => {
                let weights: Vec<usize> =
                    self.members.iter().map(|m| m.solution.distance(s)).collect();
                let total: usize = weights.iter().sum();
                if total == 0 {
                    return Err(Error::NoGuideCandidate);
                }
                let mut r = rng.gen_range(0..total);
                for (m, &w) in self.members.iter().zip(&weights) {
                    if r < w {
                        return Ok(&m.solution);
                    }
                    r -= w;
                }
                unreachable!("draw below the total weight")
            }
        }
    }

    /// Next member pair not relinked yet, in index order. The pair is
    /// marked as relinked.
    pub fn next_unrelinked_pair(&mut self) -> Option<(S, S)> {
        for i in 0..self.members.len() {
            for j in i + 1..self.members.len() {
                let key = pair_key(self.members[i].id, self.members[j].id);
                if self.relinked.insert(key) {
                    return Some((
                        self.members[i].solution.clone(),
                        self.members[j].solution.clone(),
                    ));
                }
            }
        }
        None
    }

    /// Number of live pairs not relinked yet.
    pub fn unrelinked_pairs(&self) -> usize {
        let mut count = 0;
        for i in 0..self.members.len() {
            for j in i + 1..self.members.len() {
                if !self
                    .relinked
                    .contains(&pair_key(self.members[i].id, self.members[j].id))
                {
                    count += 1;
                }
            }
        }
        count
    }

    /// Writes one `objective<TAB>solution` line per member.
    pub fn dump<W: Write>(&self, mut out: W) -> Result<()> {
        for m in &self.members {
            writeln!(out, "{}\t{}", m.objective, m.solution.to_line())?;
        }
        Ok(())
    }
}

/// Member most similar to the candidate among those it beats; ties go to
/// the worse member, then the lower index.
pub fn eviction_index<S>(
    members: &[Member<S>],
    distances: &[usize],
    candidate: Objective,
) -> Option<usize> {
    (0..members.len())
        .filter(|&i| members[i].objective < candidate)
        .min_by_key(|&i| (distances[i], members[i].objective, i))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::PartitionSolution;

    fn with_value(bits: &str, f: Objective) -> PartitionSolution {
        let mut s = PartitionSolution::from_bits(bits).unwrap();
        s.set_objective(f);
        s
    }

    #[test]
    fn first_member_is_always_admitted() {
        let mut es = EliteSet::new(3, 5).unwrap();
        assert_eq!(
            es.try_add(with_value("0000", -100)),
            Admission::Added { evicted: None }
        );
        assert_eq!(es.len(), 1);
    }

    #[test]
    fn full_pool_rejects_worse_candidates() {
        let mut es = EliteSet::new(2, 1).unwrap();
        es.try_add(with_value("0000", 5));
        es.try_add(with_value("1111", 7));
        assert_eq!(
            es.try_add(with_value("0101", 3)),
            Admission::Rejected(RejectReason::Quality)
        );
        assert_eq!(
            es.try_add(with_value("1111", 99)),
            Admission::Rejected(RejectReason::Duplicate)
        );
    }

    #[test]
    fn eviction_picks_the_most_similar_worse_member() {
        let mut es = EliteSet::new(3, 1).unwrap();
        let s = "1111100000";
        let a = with_value("0000000000", 10); // distance 5
        let b = with_value("1111111000", 8); // distance 2
        let c = with_value("0000011000", 6); // distance 7
        for m in [a, b.clone(), c] {
            assert!(es.try_add(m).is_added());
        }
        assert_eq!(
            es.try_add(with_value(s, 9)),
            Admission::Added { evicted: Some(b) }
        );
        let values: Vec<Objective> = es.members().iter().map(|m| m.objective).collect();
        assert_eq!(values, vec![10, 9, 6]);
    }

    #[test]
    fn better_than_best_bypasses_the_threshold() {
        let mut es = EliteSet::new(2, 3).unwrap();
        es.try_add(with_value("000000", 5));
        es.try_add(with_value("111111", 7));
        assert_eq!(
            es.try_add(with_value("000001", 6)),
            Admission::Rejected(RejectReason::Diversity)
        );
        assert!(es.try_add(with_value("111110", 8)).is_added());
        assert_eq!(es.best().unwrap().objective, 8);
    }

    #[test]
    fn fill_up_replaces_a_single_worse_near_duplicate() {
        let mut es = EliteSet::new(5, 2).unwrap();
        es.try_add(with_value("000000", 5));
        es.try_add(with_value("111111", 4));
        assert_eq!(
            es.try_add(with_value("000001", 3)),
            Admission::Rejected(RejectReason::Diversity)
        );
        assert_eq!(
            es.try_add(with_value("000001", 6)),
            Admission::Added {
                evicted: Some(with_value("000000", 5))
            }
        );
        assert_eq!(es.len(), 2);
    }

    #[test]
    fn guide_selection_edge_cases() {
        let mut es = EliteSet::new(3, 1).unwrap();
        let mut rng = RandomStream::new(0);
        let s = with_value("0000", 0);
        assert!(matches!(
            es.select_guide(&s, GuidePolicy::Uniform, &mut rng),
            Err(Error::EmptyEliteSet)
        ));
        es.try_add(with_value("0000", 3));
        assert!(matches!(
            es.select_guide(&s, GuidePolicy::ProportionalDelta, &mut rng),
            Err(Error::NoGuideCandidate)
        ));
        assert_eq!(
            es.select_guide(&s, GuidePolicy::Uniform, &mut rng).unwrap(),
            &with_value("0000", 3)
        );
        es.try_add(with_value("0111", 4));
        for _ in 0..1000 {
            let g = es
                .select_guide(&s, GuidePolicy::ProportionalDelta, &mut rng)
                .unwrap();
            assert_ne!(g, &s);
        }
    }

    #[test]
    fn proportional_selection_frequencies() {
        let mut es = EliteSet::new(2, 1).unwrap();
        es.try_add(with_value("1000", 1));
        es.try_add(with_value("0111", 1));
        let s = with_value("0000", 0);
        let mut rng = RandomStream::new(11);
        let draws = 100_000;
        let near = (0..draws)
            .filter(|_| {
                es.select_guide(&s, GuidePolicy::ProportionalDelta, &mut rng)
                    .unwrap()
                    .distance(&s)
                    == 1
            })
            .count();
        let p = near as f64 / draws as f64;
        assert!((p - 0.25).abs() <= 0.01, "frequency {p}");
    }

    #[test]
    fn pair_bookkeeping() {
        let mut es: EliteSet<PartitionSolution> = EliteSet::new(3, 1).unwrap();
        assert!(es.next_unrelinked_pair().is_none());
        es.try_add(with_value("000", 1));
        es.try_add(with_value("011", 2));
        es.try_add(with_value("110", 3));
        let mut pairs = 0;
        while es.next_unrelinked_pair().is_some() {
            pairs += 1;
        }
        assert_eq!(pairs, 3);
        assert!(es.try_add(with_value("111", 4)).is_added());
        assert_eq!(es.unrelinked_pairs(), 2);
        assert!(es.next_unrelinked_pair().is_some());
        assert!(es.next_unrelinked_pair().is_some());
        assert!(es.next_unrelinked_pair().is_none());
    }

    #[test]
    fn dump_writes_one_line_per_member() {
        let mut es = EliteSet::new(2, 1).unwrap();
        es.try_add(with_value("01", 3));
        es.try_add(with_value("10", 4));
        let mut buf = Vec::new();
        es.dump(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "3\t01\n4\t10\n");
    }

    #[test]
    fn default_threshold_rounds_up() {
        assert_eq!(default_threshold(10), 1);
        assert_eq!(default_threshold(20), 1);
        assert_eq!(default_threshold(21), 2);
        assert_eq!(default_threshold(150), 8);
    }
}
