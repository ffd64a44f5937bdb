//! Instance files, benchmark grids, summary statistics and run profiles.

mod formats;
mod harness;
mod stats;

pub use formats::{
    load_instance, parse_edge_list, parse_instance, parse_lolib, write_edge_list, write_lolib,
    Instance, ParseError, ProblemKind, MAX_EDGE_LIST_VERTICES, MAX_MATRIX_DIMENSION,
};
pub use harness::{
    apply_problem_defaults, experiment_methods, preset, run_bench, MethodSpec, PRESETS,
};
pub use stats::{
    aggregate_seeds, compute_stats, emit_profile, read_best_known, write_profile,
    write_results_csv, write_stats_csv, ExperimentStats, MethodStats, ResultRow, RESULTS_HEADER,
    STATS_HEADER,
};
