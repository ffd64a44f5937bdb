//! Semi-greedy randomized construction.
//!
//! Two restricted candidate list (RCL) rules are available: a value
//! threshold relative to the best attractiveness, and a cardinality cut on
//! the ranked candidate list. Both are driven by an `alpha` where 0 is
//! purely greedy and 1 is purely random.

use rand::Rng;

use crate::core::{Objective, Problem, RandomStream};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RclMode {
    /// `g(v) >= (1 - alpha) * g_max`.
    ValueThreshold,
    /// The `1 + floor(alpha * (|CL| - 1))` most attractive candidates.
    Cardinality,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RclConfig {
    pub mode: RclMode,
    pub alpha_low: f64,
    pub alpha_high: f64,
    /// Draw a fresh alpha before every insertion instead of once per solution.
    pub per_step_alpha: bool,
}

impl Default for RclConfig {
    fn default() -> Self {
        Self {
            mode: RclMode::ValueThreshold,
            alpha_low: 0.0,
            alpha_high: 0.3,
            per_step_alpha: true,
        }
    }
}

impl RclConfig {
    /// Fully greedy construction.
    pub fn greedy(mode: RclMode) -> Self {
        Self {
            mode,
            alpha_low: 0.0,
            alpha_high: 0.0,
            per_step_alpha: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = (0.0..=1.0).contains(&self.alpha_low)
            && (0.0..=1.0).contains(&self.alpha_high)
            && self.alpha_low <= self.alpha_high;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidConfig(format!(
                "alpha range ({}, {}] must satisfy 0 <= low <= high <= 1",
                self.alpha_low, self.alpha_high
            )))
        }
    }

    /// Draws alpha uniformly in `(alpha_low, alpha_high]`. A collapsed range
    /// returns its single value without consuming randomness.
    pub fn draw_alpha(&self, rng: &mut RandomStream) -> f64 {
        if self.alpha_high <= self.alpha_low {
            return self.alpha_high;
        }
        let u: f64 = rng.gen();
        self.alpha_high - u * (self.alpha_high - self.alpha_low)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub element: usize,
    pub score: Objective,
}

/// Elements that can extend the current partial solution, with their
/// attractiveness.
#[derive(Clone, Debug, Default)]
pub struct CandidateList {
    entries: Vec<Candidate>,
}

impl CandidateList {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, Objective)>) -> Self {
        Self {
            entries: pairs
                .into_iter()
                .map(|(element, score)| Candidate { element, score })
                .collect(),
        }
    }

    pub fn push(&mut self, element: usize, score: Objective) {
        self.entries.push(Candidate { element, score });
    }

    pub fn clear(&mut self) {
        self.entries.clear();
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Candidate] {
        &self.entries
    }

    pub fn max_score(&self) -> Option<Objective> {
        self.entries.iter().map(|c| c.score).max()
    }

    /// Candidates ordered by decreasing score, ties by increasing element id.
    pub fn ranked(&self) -> Vec<Candidate> {
        let mut ranked = self.entries.clone();
        ranked.sort_by(|a, b| b.score.cmp(&a.score).then(a.element.cmp(&b.element)));
        ranked
    }
}

/// Value-threshold RCL, returned sorted by element id.
///
/// The comparison is applied literally even when `g_max < 0`, where it
/// admits nothing by itself; the greedy-best elements are always members so
/// the list is never empty.
pub fn build_rcl_value(cl: &CandidateList, alpha: f64) -> Result<Vec<usize>> {
    let g_max = cl.max_score().ok_or(Error::EmptyCandidateList)?;
    let threshold = (1.0 - alpha) * g_max as f64;
    let mut rcl: Vec<usize> = cl
        .entries
        .iter()
        .filter(|c| c.score == g_max || c.score as f64 >= threshold)
        .map(|c| c.element)
        .collect();
    rcl.sort_unstable();
    Ok(rcl)
}

/// Number of candidates kept by the cardinality rule.
pub fn cardinality_cut(list_len: usize, alpha: f64) -> usize {
    let extra = (alpha * (list_len.saturating_sub(1)) as f64).floor() as usize;
    (1 + extra).min(list_len.max(1))
}

/// Cardinality RCL: the `p_max` best candidates, ties at the cut broken by
/// lowest element id. Returned sorted by element id.
pub fn build_rcl_cardinality(cl: &CandidateList, alpha: f64) -> Result<Vec<usize>> {
    if cl.is_empty() {
        return Err(Error::EmptyCandidateList);
    }
    let p_max = cardinality_cut(cl.len(), alpha);
    let mut rcl: Vec<usize> = cl
        .ranked()
        .into_iter()
        .take(p_max)
        .map(|c| c.element)
        .collect();
    rcl.sort_unstable();
    Ok(rcl)
}

pub fn build_rcl(cl: &CandidateList, mode: RclMode, alpha: f64) -> Result<Vec<usize>> {
    match mode {
        RclMode::ValueThreshold => build_rcl_value(cl, alpha),
        RclMode::Cardinality => build_rcl_cardinality(cl, alpha),
    }
}

/// Problems that can be built one element at a time.
pub trait Constructive: Problem {
    /// Partial solution plus whatever incremental state the problem keeps
    /// to update attractiveness values.
    type Partial;

    fn start(&self) -> Self::Partial;

    fn is_complete(&self, partial: &Self::Partial) -> bool;

    /// Fills `out` with every feasible extension and its attractiveness.
    fn candidates(&self, partial: &Self::Partial, out: &mut CandidateList);

    /// Adds `element` and updates the remaining attractiveness values.
    fn extend(&self, partial: &mut Self::Partial, element: usize);

    /// Converts a complete partial solution into an evaluated solution.
    fn finish(&self, partial: Self::Partial) -> Self::Solution;
}

/// Builds one complete solution with the semi-greedy rule in `cfg`.
///
/// With `alpha == 0` the lowest-id greedy candidate is taken without
/// drawing from `rng`, so greedy construction is a pure function of the
/// instance.
pub fn construct<P: Constructive>(
    problem: &P,
    cfg: &RclConfig,
    rng: &mut RandomStream,
) -> Result<P::Solution> {
    cfg.validate()?;
    let mut partial = problem.start();
    let mut cl = CandidateList::new();
    let mut alpha = cfg.draw_alpha(rng);
    let mut first = true;
    while !problem.is_complete(&partial) {
        if cfg.per_step_alpha && !first {
            alpha = cfg.draw_alpha(rng);
        }
        first = false;
        cl.clear();
        problem.candidates(&partial, &mut cl);
        let rcl = build_rcl(&cl, cfg.mode, alpha)?;
        let element = if alpha == 0.0 || rcl.len() == 1 {
            rcl[0]
        } else {
            rcl[rng.gen_range(0..rcl.len())]
        };
        problem.extend(&mut partial, element);
    }
    Ok(problem.finish(partial))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abc() -> CandidateList {
        // a = 0, b = 1, c = 2
        CandidateList::from_pairs([(0, 10), (1, 9), (2, 5)])
    }

    #[test]
    fn value_rcl_examples() {
        assert_eq!(build_rcl_value(&abc(), 0.2).unwrap(), vec![0, 1]);
        assert_eq!(build_rcl_value(&abc(), 0.0).unwrap(), vec![0]);
        assert_eq!(build_rcl_value(&abc(), 1.0).unwrap(), vec![0, 1, 2]);
    }

    #[test]
    fn value_rcl_with_negative_maximum_keeps_the_best() {
        let cl = CandidateList::from_pairs([(0, -4), (1, -10), (2, -4)]);
        assert_eq!(build_rcl_value(&cl, 0.3).unwrap(), vec![0, 2]);
    }

    #[test]
    fn cardinality_cut_examples() {
        assert_eq!(cardinality_cut(10, 0.3), 3);
        assert_eq!(cardinality_cut(10, 0.0), 1);
        assert_eq!(cardinality_cut(10, 1.0), 10);
    }

    #[test]
    fn cardinality_rcl_breaks_ties_by_id() {
        let cl = CandidateList::from_pairs([(4, 7), (1, 7), (3, 9), (0, 2)]);
        // p_max = 1 + floor(0.5 * 3) = 2: element 3 and the lower-id of the 7s.
        assert_eq!(build_rcl_cardinality(&cl, 0.5).unwrap(), vec![1, 3]);
    }

    #[test]
    fn empty_list_is_an_error() {
        let cl = CandidateList::new();
        assert!(matches!(build_rcl_value(&cl, 0.1), Err(Error::EmptyCandidateList)));
        assert!(matches!(
            build_rcl_cardinality(&cl, 0.1),
            Err(Error::EmptyCandidateList)
        ));
    }

    #[test]
    fn alpha_draws_stay_in_range() {
        let cfg = RclConfig::default();
        let mut rng = RandomStream::new(3);
        for _ in 0..10_000 {
            let a = cfg.draw_alpha(&mut rng);
            assert!(a > 0.0 && a <= 0.3);
        }
    }

    #[test]
    fn invalid_alpha_range_is_rejected() {
        let cfg = RclConfig {
            alpha_low: 0.5,
            alpha_high: 0.2,
            ..RclConfig::default()
        };
        assert!(cfg.validate().is_err());
    }
}
