//! Method presets and the (method x instance x seed) benchmark grid.

use rayon::prelude::*;

use super::formats::{Instance, ProblemKind};
use super::stats::ResultRow;
use crate::construction::RclMode;
use crate::drivers::{run, RunConfig, Variant};
use crate::error::{Error, Result};
use crate::local_search::SearchDepth;
use crate::path_relinking::{Direction, InPathLs, StepSelection};

/// Relinking defaults that worked best for each problem.
pub fn apply_problem_defaults(cfg: &mut RunConfig, kind: ProblemKind) {
    match kind {
        ProblemKind::Lop => {
            cfg.pr.direction = Direction::Mixed;
            cfg.pr.step = StepSelection::GreedyRandomized { rcl_size: 3 };
            cfg.pr.in_path_ls = InPathLs::BestOnly;
        }
        ProblemKind::MaxCut => {
            cfg.pr.direction = Direction::Forward;
            cfg.pr.step = StepSelection::Greedy;
            cfg.pr.in_path_ls = InPathLs::EveryQ(5);
        }
    }
}

pub const PRESETS: &[&str] = &[
    "semigreedy1",
    "semigreedy2",
    "grasp_first",
    "grasp_best",
    "stpr_forward",
    "stpr_backward",
    "stpr_mixed",
    "ls_all",
    "ls_every5",
    "ls_best",
    "gpr",
    "grpr",
    "static",
    "dynamic",
    "evolutionary",
    "grasp_pr",
    "custom",
];

/// Methods compared by each numbered experiment.
pub fn experiment_methods(experiment: u8) -> Result<&'static [&'static str]> {
    Ok(match experiment {
        1 => &["semigreedy1", "semigreedy2"],
        2 => &["grasp_first", "grasp_best"],
        3 => &["stpr_forward", "stpr_backward", "stpr_mixed"],
        4 => &["ls_all", "ls_every5", "ls_best"],
        5 => &["gpr", "grpr"],
        6 => &["static", "dynamic", "evolutionary"],
        7 => &["semigreedy1", "grasp_best", "grasp_pr"],
        other => {
            return Err(Error::InvalidConfig(format!(
                "unknown experiment {other}; expected 1 to 7"
            )))
        }
    })
}

/// Derives the configuration of a named method from `base`.
pub fn preset(name: &str, base: &RunConfig) -> Result<RunConfig> {
    let mut cfg = base.clone();
    let rcl_size = match base.pr.step {
        StepSelection::GreedyRandomized { rcl_size } => rcl_size,
        StepSelection::Greedy => 3,
    };
    match name {
        "semigreedy1" | "semigreedy2" => {
            cfg.variant = Variant::Grasp;
            cfg.depth = None;
            cfg.rcl.mode = if name == "semigreedy1" {
                RclMode::ValueThreshold
            } else {
                RclMode::Cardinality
            };
        }
        "grasp_first" => {
            cfg.variant = Variant::Grasp;
            cfg.depth = Some(SearchDepth::FirstImproving);
        }
        "grasp_best" => {
            cfg.variant = Variant::Grasp;
            cfg.depth = Some(SearchDepth::BestImproving);
        }
        "stpr_forward" | "stpr_backward" | "stpr_mixed" => {
            cfg.variant = Variant::StaticPr;
            cfg.pr.direction = match name {
                "stpr_forward" => Direction::Forward,
                "stpr_backward" => Direction::Backward,
                _ => Direction::Mixed,
            };
        }
        "ls_all" | "ls_every5" | "ls_best" => {
            cfg.variant = Variant::StaticPr;
            cfg.pr.in_path_ls = match name {
                "ls_all" => InPathLs::All,
                "ls_every5" => InPathLs::EveryQ(5),
                _ => InPathLs::BestOnly,
            };
        }
        "gpr" => {
            cfg.variant = Variant::StaticPr;
            cfg.pr.step = StepSelection::Greedy;
        }
        "grpr" => {
            cfg.variant = Variant::StaticPr;
            cfg.pr.step = StepSelection::GreedyRandomized { rcl_size };
        }
        "static" => cfg.variant = Variant::StaticPr,
        "dynamic" => cfg.variant = Variant::DynamicPr,
        "evolutionary" => cfg.variant = Variant::EvolutionaryPr,
        "grasp_pr" => {
            cfg.variant = Variant::StaticPr;
            cfg.static_sample = None;
        }
        "custom" => {}
        other => {
            return Err(Error::InvalidConfig(format!(
                "unknown method {other:?}; known methods: {}",
                PRESETS.join(", ")
            )))
        }
    }
    Ok(cfg)
}

#[derive(Clone, Debug, PartialEq)]
pub struct MethodSpec {
    pub name: String,
    pub config: RunConfig,
}

fn run_cell(method: &MethodSpec, instance: &Instance, seed: u64) -> Result<ResultRow> {
    let cfg = RunConfig {
        seed,
        ..method.config.clone()
    };
    let (best_objective, iterations, elapsed_s, restarts) = match instance {
        Instance::Lop(p) => {
            let r = run(p, &cfg)?;
            (r.best_objective, r.iterations, r.elapsed_s, r.restarts)
        }
        Instance::MaxCut(p) => {
            let r = run(p, &cfg)?;
            (r.best_objective, r.iterations, r.elapsed_s, r.restarts)
        }
    };
    Ok(ResultRow {
        method: method.name.clone(),
        instance: instance.name().to_string(),
        seed,
        best_objective,
        iterations,
        elapsed_s,
        restarts,
    })
}

/// Runs every `(method, instance, seed)` cell on `jobs` worker threads.
/// Rows come back in grid order (method, then instance, then seed)
/// whatever the number of workers.
pub fn run_bench(
    instances: &[Instance],
    methods: &[MethodSpec],
    seeds: &[u64],
    jobs: usize,
) -> Result<Vec<ResultRow>> {
    if instances.is_empty() || methods.is_empty() || seeds.is_empty() {
        return Err(Error::InvalidConfig(
            "a benchmark needs at least one instance, method and seed".into(),
        ));
    }
    let cells: Vec<(&MethodSpec, &Instance, u64)> = methods
        .iter()
        .flat_map(|m| {
            instances
                .iter()
                .flat_map(move |i| seeds.iter().map(move |&s| (m, i, s)))
        })
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidConfig(format!("cannot start worker threads: {e}")))?;
    let results: Vec<Result<ResultRow>> = pool.install(|| {
        cells
            .par_iter()
            .map(|&(m, i, s)| {
                run_cell(m, i, s).map_err(|e| Error::Cell {
                    method: m.name.clone(),
                    instance: i.name().to_string(),
                    seed: s,
                    source: Box::new(e),
                })
            })
            .collect()
    });
    results.into_iter().collect()
}
