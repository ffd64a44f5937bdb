//! Top-level searches: plain GRASP, GRASP with static, dynamic or
//! evolutionary path relinking, and stagnation restarts.

use std::time::{Duration, Instant};

use log::debug;

use crate::construction::{construct, Constructive, RclConfig};
use crate::core::{Objective, RandomStream, Solution};
use crate::elite::{default_threshold, EliteSet, GuidePolicy};
use crate::error::{Error, Result};
use crate::local_search::{LocalSearch, MoveFamily, SearchDepth};
use crate::path_relinking::{exterior_relink, relink, PrConfig, Relinkable};

/// Everything a driver needs from a problem.
pub trait SearchProblem: Constructive + Relinkable {}

impl<P: Constructive + Relinkable> SearchProblem for P {}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Variant {
    Grasp,
    StaticPr,
    DynamicPr,
    #[default]
    EvolutionaryPr,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub variant: Variant,
    pub time_limit: Option<Duration>,
    pub iteration_limit: Option<u64>,
    pub seed: u64,
    /// Restart after this many iterations without improvement.
    pub restart_kappa: Option<u64>,
    pub rcl: RclConfig,
    /// `None` skips local search entirely (construction only).
    pub depth: Option<SearchDepth>,
    pub ls_family: MoveFamily,
    pub pr: PrConfig,
    pub elite_k: usize,
    /// `None` uses 5% of the instance size.
    pub diversity_threshold: Option<usize>,
    pub guide_policy: GuidePolicy,
    /// Iterations before static relinking; `None` spends half the time budget.
    pub static_sample: Option<u64>,
    /// Relink every `pr_period`-th iteration.
    pub pr_period: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            variant: Variant::default(),
            time_limit: Some(Duration::from_secs(60)),
            iteration_limit: None,
            seed: 0,
            restart_kappa: None,
            rcl: RclConfig::default(),
            depth: Some(SearchDepth::BestImproving),
            ls_family: MoveFamily::Standard,
            pr: PrConfig::default(),
            elite_k: 10,
            diversity_threshold: None,
            guide_policy: GuidePolicy::Uniform,
            static_sample: Some(100),
            pr_period: 1,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.time_limit.is_none() && self.iteration_limit.is_none() {
            return Err(Error::InvalidConfig(
                "a time limit or an iteration limit is required".into(),
            ));
        }
        if self.elite_k == 0 {
            return Err(Error::InvalidConfig("elite capacity must be at least 1".into()));
        }
        if self.pr_period == 0 {
            return Err(Error::InvalidConfig("relinking period must be at least 1".into()));
        }
        if self.restart_kappa == Some(0) {
            return Err(Error::InvalidConfig("restart threshold must be at least 1".into()));
        }
        self.rcl.validate()?;
        self.pr.validate()
    }

    fn local_search(&self) -> Option<LocalSearch> {
        self.depth
            .map(|d| LocalSearch::new(d).with_family(self.ls_family))
    }
}

#[derive(Clone, Debug)]
pub struct RunReport<S> {
    pub best_solution: S,
    pub best_objective: Objective,
    /// `(elapsed seconds, objective)` at every incumbent improvement.
    pub incumbent_series: Vec<(f64, Objective)>,
    pub iterations: u64,
    pub restarts: u64,
    pub pr_calls: u64,
    pub pr_improvements: u64,
    pub elapsed_s: f64,
}

/// Shared run state: clock, incumbent, counters, pool and random stream.
struct Search<'a, P: SearchProblem> {
    problem: &'a P,
    cfg: &'a RunConfig,
    ls: Option<LocalSearch>,
    start: Instant,
    rng: RandomStream,
    elite: EliteSet<P::Solution>,
    best: Option<P::Solution>,
    series: Vec<(f64, Objective)>,
    iterations: u64,
    restarts: u64,
    pr_calls: u64,
    pr_improvements: u64,
    stagnation: u64,
}

impl<'a, P: SearchProblem> Search<'a, P> {
    fn new(problem: &'a P, cfg: &'a RunConfig, rng: RandomStream) -> Result<Self> {
        cfg.validate()?;
        let threshold = cfg
            .diversity_threshold
            .unwrap_or_else(|| default_threshold(problem.size()));
        Ok(Self {
            problem,
            cfg,
            ls: cfg.local_search(),
            start: Instant::now(),
            rng,
            elite: EliteSet::new(cfg.elite_k, threshold)?,
            best: None,
            series: Vec::new(),
            iterations: 0,
            restarts: 0,
            pr_calls: 0,
            pr_improvements: 0,
            stagnation: 0,
        })
    }

    fn elapsed(&self) -> Duration {
        self.start.elapsed()
    }

    fn out_of_time(&self, budget: Option<Duration>) -> bool {
        budget.is_some_and(|b| self.elapsed() >= b)
    }

    fn iterations_done(&self, limit: Option<u64>) -> bool {
        limit.is_some_and(|l| self.iterations >= l)
    }

    /// Records `s` as the incumbent when it is strictly better.
    fn offer(&mut self, s: &P::Solution) -> bool {
        let f = s.objective().expect("evaluated solution");
        if self.best.as_ref().is_none_or(|b| f > b.objective().unwrap()) {
            self.best = Some(s.clone());
            let t = self.elapsed().as_secs_f64();
            self.series.push((t, f));
            true
        } else {
            false
        }
    }

    fn improve(&mut self, s: P::Solution) -> P::Solution {
        match self.ls {
            Some(ls) => ls.run(self.problem, s, &mut self.rng).solution,
            None => {
                let mut s = s;
                self.problem.ensure_evaluated(&mut s);
                s
            }
        }
    }

    fn grasp_solution(&mut self) -> Result<P::Solution> {
        let s = construct(self.problem, &self.cfg.rcl, &mut self.rng)?;
        Ok(self.improve(s))
    }

    /// Relinks a pair and locally improves the result. `None` when the
    /// endpoints coincide or are too close to relink.
    fn relink_pair(&mut self, a: &P::Solution, b: &P::Solution) -> Result<Option<P::Solution>> {
        if a == b {
            return Ok(None);
        }
        let pr = &self.cfg.pr;
        let (best, trace) = if pr.exterior_steps > 0 {
            exterior_relink(self.problem, a, b, pr.exterior_steps, pr, &mut self.rng)?
        } else {
            relink(self.problem, a, b, pr, &mut self.rng)?
        };
        if trace.guard_fired {
            return Ok(None);
        }
        self.pr_calls += 1;
        Ok(Some(self.improve(best)))
    }

    fn note_pr_result(&mut self, r: &P::Solution) -> bool {
        let improved = self.offer(r);
        if improved {
            self.pr_improvements += 1;
        }
        improved
    }

    /// Applies the stagnation rule after an iteration.
    fn maybe_restart(&mut self, improved: bool) -> bool {
        if improved {
            self.stagnation = 0;
            return false;
        }
        self.stagnation += 1;
        match self.cfg.restart_kappa {
            Some(kappa) if self.stagnation >= kappa => {
                self.elite.clear();
                self.rng.next_substream();
                self.stagnation = 0;
                self.restarts += 1;
                debug!("restart {} after {} iterations", self.restarts, self.iterations);
                true
            }
            _ => false,
        }
    }

    /// One GRASP iteration followed, when due, by relinking against a guide
    /// from the pool.
    fn dynamic_iteration(&mut self) -> Result<()> {
        let s = self.grasp_solution()?;
        self.iterations += 1;
        let mut improved = self.offer(&s);
        let due = self.iterations.is_multiple_of(self.cfg.pr_period);
        if !due || !self.elite.is_full() {
            self.elite.try_add(s.clone());
        }
        if due && !self.elite.is_empty() {
            let guide = match self.elite.select_guide(&s, self.cfg.guide_policy, &mut self.rng) {
                Ok(g) => Some(g.clone()),
                Err(Error::NoGuideCandidate) => None,
                Err(e) => return Err(e),
            };
            if let Some(guide) = guide {
                if let Some(r) = self.relink_pair(&s, &guide)? {
                    improved |= self.note_pr_result(&r);
                    self.elite.try_add(r);
                }
            }
        }
        self.maybe_restart(improved);
        Ok(())
    }

    /// Relinks pool pairs not relinked yet, feeding results back to the pool.
    fn evolve(&mut self, budget: Option<Duration>) -> Result<()> {
        while !self.out_of_time(budget) {
            let Some((a, b)) = self.elite.next_unrelinked_pair() else {
                break;
            };
            if let Some(r) = self.relink_pair(&a, &b)? {
                self.note_pr_result(&r);
                self.elite.try_add(r);
            }
        }
        Ok(())
    }

    fn finish(self) -> RunReport<P::Solution> {
        let best = self.best.expect("at least one iteration ran");
        RunReport {
            best_objective: best.objective().expect("evaluated incumbent"),
            best_solution: best,
            incumbent_series: self.series,
            iterations: self.iterations,
            restarts: self.restarts,
            pr_calls: self.pr_calls,
            pr_improvements: self.pr_improvements,
            elapsed_s: self.start.elapsed().as_secs_f64(),
        }
    }
}

fn half(budget: Option<Duration>) -> Option<Duration> {
    budget.map(|b| b / 2)
}

/// Construction plus local search, repeated until the stopping rule fires.
pub fn run_grasp<P: SearchProblem>(
    problem: &P,
    cfg: &RunConfig,
    rng: RandomStream,
) -> Result<RunReport<P::Solution>> {
    let mut run = Search::new(problem, cfg, rng)?;
    loop {
        let s = run.grasp_solution()?;
        run.iterations += 1;
        run.offer(&s);
        if run.iterations_done(cfg.iteration_limit) || run.out_of_time(cfg.time_limit) {
            break;
        }
    }
    Ok(run.finish())
}

/// GRASP with relinking after every local search (every `pr_period`-th).
pub fn run_dynamic_pr<P: SearchProblem>(
    problem: &P,
    cfg: &RunConfig,
    rng: RandomStream,
) -> Result<RunReport<P::Solution>> {
    let mut run = Search::new(problem, cfg, rng)?;
    loop {
        run.dynamic_iteration()?;
        if run.iterations_done(cfg.iteration_limit) || run.out_of_time(cfg.time_limit) {
            break;
        }
    }
    Ok(run.finish())
}

/// GRASP that fills the pool, then relinks every pool pair once. The pool
/// is frozen during the relinking phase.
pub fn run_static_pr<P: SearchProblem>(
    problem: &P,
    cfg: &RunConfig,
    rng: RandomStream,
) -> Result<RunReport<P::Solution>> {
    let mut run = Search::new(problem, cfg, rng)?;
    let sample = match (cfg.static_sample, cfg.iteration_limit) {
        (Some(s), Some(l)) => Some(s.min(l)),
        (Some(s), None) => Some(s),
        (None, l) => l,
    };
    let phase_one_time = if cfg.static_sample.is_none() {
        half(cfg.time_limit)
    } else {
        cfg.time_limit
    };
    loop {
        let s = run.grasp_solution()?;
        run.iterations += 1;
        run.offer(&s);
        run.elite.try_add(s);
        if run.iterations_done(sample) || run.out_of_time(phase_one_time) {
            break;
        }
    }
    let members: Vec<P::Solution> = run
        .elite
        .members()
        .iter()
        .map(|m| m.solution.clone())
        .collect();
    'pairs: for i in 0..members.len() {
        for j in i + 1..members.len() {
            if run.out_of_time(cfg.time_limit) {
                break 'pairs;
            }
            if let Some(r) = run.relink_pair(&members[i], &members[j])? {
                run.note_pr_result(&r);
            }
        }
    }
    Ok(run.finish())
}

/// Dynamic GRASP with relinking for half the budget, then repeated
/// relinking of pool pairs that were not relinked yet.
pub fn run_evolutionary_pr<P: SearchProblem>(
    problem: &P,
    cfg: &RunConfig,
    rng: RandomStream,
) -> Result<RunReport<P::Solution>> {
    let mut run = Search::new(problem, cfg, rng)?;
    let phase_one = half(cfg.time_limit);
    loop {
        run.dynamic_iteration()?;
        if run.iterations_done(cfg.iteration_limit) || run.out_of_time(phase_one) {
            break;
        }
    }
    run.evolve(cfg.time_limit)?;
    Ok(run.finish())
}

/// Runs the configured variant with a stream seeded from `cfg.seed`.
pub fn run<P: SearchProblem>(problem: &P, cfg: &RunConfig) -> Result<RunReport<P::Solution>> {
    let rng = RandomStream::new(cfg.seed);
    match cfg.variant {
        Variant::Grasp => run_grasp(problem, cfg, rng),
        Variant::StaticPr => run_static_pr(problem, cfg, rng),
        Variant::DynamicPr => run_dynamic_pr(problem, cfg, rng),
        Variant::EvolutionaryPr => run_evolutionary_pr(problem, cfg, rng),
    }
}
