//! Command-line interface: `solve`, `bench`, `profile` and `validate`.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bench_io::{
    aggregate_seeds, apply_problem_defaults, compute_stats, emit_profile, experiment_methods,
    load_instance, preset, read_best_known, run_bench, write_results_csv, write_stats_csv,
    Instance, MethodSpec, ProblemKind,
};
use crate::construction::RclMode;
use crate::core::Solution;
use crate::drivers::{run, RunConfig, RunReport, Variant};
use crate::elite::GuidePolicy;
use crate::error::Error;
use crate::local_search::{MoveFamily, SearchDepth};
use crate::path_relinking::{Direction, InPathLs, StepSelection};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_SOFTWARE: i32 = 70;
pub const EXIT_IO: i32 = 74;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        Self {
            code: exit_code(&e),
            message: e.to_string(),
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) => EXIT_PARSE,
        Error::Io(_) | Error::Csv(_) => EXIT_IO,
        Error::InvalidConfig(_) | Error::Unsupported(_) => EXIT_USAGE,
        Error::Cell { source, .. } => exit_code(source),
        _ => EXIT_SOFTWARE,
    }
}

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError {
        code: EXIT_IO,
        message: format!("{}: {e}", path.display()),
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "grasppr",
    version,
    about = "GRASP with path relinking for linear ordering and max-cut",
    args_override_self = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one search on one instance.
    Solve(SolveArgs),
    /// Run a (method x instance x seed) grid and summarize it.
    Bench(BenchArgs),
    /// Record incumbent profiles of several methods on one instance.
    Profile(ProfileArgs),
    /// Parse an instance file and print a summary.
    Validate(ValidateArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ProblemArg {
    Lop,
    Maxcut,
}

impl From<ProblemArg> for ProblemKind {
    fn from(p: ProblemArg) -> Self {
        match p {
            ProblemArg::Lop => ProblemKind::Lop,
            ProblemArg::Maxcut => ProblemKind::MaxCut,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Grasp,
    #[value(name = "static_pr")]
    StaticPr,
    #[value(name = "dynamic_pr")]
    DynamicPr,
    #[value(name = "evolutionary_pr")]
    EvolutionaryPr,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DirectionArg {
    Forward,
    Backward,
    Bf,
    Mixed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StepArg {
    Greedy,
    Grpr,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DepthArg {
    First,
    Best,
    /// No local search: construction only.
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RclModeArg {
    Value,
    Card,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GuideArg {
    Uniform,
    Pdelta,
}

fn parse_inpath(s: &str) -> Result<InPathLs, String> {
    match s {
        "none" => Ok(InPathLs::None),
        "all" => Ok(InPathLs::All),
        "best" => Ok(InPathLs::BestOnly),
        _ => match s.strip_prefix("every:").map(str::parse::<usize>) {
            Some(Ok(q)) if q >= 1 => Ok(InPathLs::EveryQ(q)),
            _ => Err(format!("expected none, all, best or every:Q with Q >= 1, got {s:?}")),
        },
    }
}

/// Search settings shared by every running subcommand.
#[derive(Debug, Clone, Args)]
pub struct SearchArgs {
    /// Problem type of the instance files.
    #[arg(long, value_enum)]
    pub problem: ProblemArg,
    /// Search procedure.
    #[arg(long, value_enum, default_value = "evolutionary_pr")]
    pub variant: VariantArg,
    /// Relinking direction [default: mixed for lop, forward for maxcut].
    #[arg(long, value_enum)]
    pub direction: Option<DirectionArg>,
    /// Relinking step selection [default: grpr for lop, greedy for maxcut].
    #[arg(long, value_enum)]
    pub step: Option<StepArg>,
    /// Candidate list size of randomized relinking steps.
    #[arg(long, default_value_t = 3)]
    pub rcl_size: usize,
    /// Fraction of each relinking path that is walked.
    #[arg(long, default_value_t = 1.0)]
    pub trunc: f64,
    /// Minimum distance between relinked solutions.
    #[arg(long, default_value_t = 4)]
    pub min_dist: usize,
    /// Local search inside relinking paths: none, all, every:Q or best
    /// [default: best for lop, every:5 for maxcut].
    #[arg(long, value_parser = parse_inpath)]
    pub inpath_ls: Option<InPathLs>,
    /// Local search depth.
    #[arg(long, value_enum, default_value = "best")]
    pub depth: DepthArg,
    /// Lower end of the construction randomness range.
    #[arg(long, default_value_t = 0.0)]
    pub alpha_min: f64,
    /// Upper end of the construction randomness range.
    #[arg(long, default_value_t = 0.3)]
    pub alpha_max: f64,
    /// Restricted candidate list rule.
    #[arg(long, value_enum, default_value = "value")]
    pub rcl_mode: RclModeArg,
    /// Elite set capacity.
    #[arg(long, default_value_t = 10)]
    pub elite_k: usize,
    /// Elite diversity threshold [default: 5% of the instance size].
    #[arg(long)]
    pub dth: Option<usize>,
    /// How guiding solutions are drawn from the elite set.
    #[arg(long, value_enum, default_value = "uniform")]
    pub guide: GuideArg,
    /// Restart after this many iterations without improvement.
    #[arg(long)]
    pub kappa: Option<u64>,
    /// Time budget in seconds [default: 60, or unlimited when --iters is given].
    #[arg(long)]
    pub time: Option<f64>,
    /// Iteration budget.
    #[arg(long)]
    pub iters: Option<u64>,
    /// Random seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Constructions before static relinking; 0 spends half the time budget.
    #[arg(long, default_value_t = 100)]
    pub static_sample: u64,
    /// Use swap moves in local search and relinking.
    #[arg(long)]
    pub swap_moves: bool,
    /// Relink every N-th iteration.
    #[arg(long, default_value_t = 1)]
    pub pr_period: u64,
    /// Exterior relinking steps (partitions only); 0 relinks between the
    /// endpoints.
    #[arg(long, default_value_t = 0)]
    pub exterior: usize,
    /// Flat key=value file with the same keys as the long flags; explicit
    /// flags win.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub search: SearchArgs,
    /// Instance file.
    #[arg(long)]
    pub instance: PathBuf,
    /// Write the best solution to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write the incumbent profile CSV to this file.
    #[arg(long)]
    pub profile: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub search: SearchArgs,
    /// Directory of instance files.
    #[arg(long)]
    pub instances: PathBuf,
    /// Comma-separated method names.
    #[arg(long, value_delimiter = ',')]
    pub methods: Vec<String>,
    /// Use the methods of a numbered experiment (1 to 7).
    #[arg(long)]
    pub experiment: Option<u8>,
    /// Comma-separated seeds [default: the value of --seed].
    #[arg(long, value_delimiter = ',')]
    pub seeds: Vec<u64>,
    /// Concurrent benchmark cells.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Output directory for results.csv and stats.csv.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// CSV of instance,best_known values.
    #[arg(long)]
    pub best_known: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ProfileArgs {
    #[command(flatten)]
    pub search: SearchArgs,
    /// Instance file.
    #[arg(long)]
    pub instance: PathBuf,
    /// Comma-separated method names [default: semigreedy1,grasp_best,grasp_pr].
    #[arg(long, value_delimiter = ',')]
    pub methods: Vec<String>,
    /// Output directory; one <method>.csv per method.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Instance file.
    #[arg(long)]
    pub instance: PathBuf,
    /// Problem type [default: inferred from the extension: .el/.edges/.gset
    /// for maxcut, anything else for lop].
    #[arg(long, value_enum)]
    pub problem: Option<ProblemArg>,
}

/// Flags that take no value when read from a config file.
const SWITCHES: &[&str] = &["swap-moves"];

/// Expands `--config FILE` into flags placed right after the subcommand,
/// so explicit flags given later override them.
pub fn expand_config(args: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let mut path: Option<PathBuf> = None;
    for (i, a) in args.iter().enumerate() {
        let s = a.to_string_lossy();
        if s == "--config" {
            path = args.get(i + 1).map(PathBuf::from);
        } else if let Some(p) = s.strip_prefix("--config=") {
            path = Some(PathBuf::from(p));
        }
    }
    let Some(path) = path else {
        return Ok(args);
    };
    let text = fs::read_to_string(&path).map_err(|e| io_error(&path, e))?;
    let mut extra: Vec<OsString> = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::usage(format!(
                "{}:{}: expected key=value, got {line:?}",
                path.display(),
                no + 1
            )));
        };
        let (key, value) = (key.trim().replace('_', "-"), value.trim());
        if key == "config" {
            return Err(CliError::usage("config files cannot include other config files"));
        }
        if SWITCHES.contains(&key.as_str()) {
            match value {
                "true" | "1" | "yes" => extra.push(format!("--{key}").into()),
                "false" | "0" | "no" => {}
                other => {
                    return Err(CliError::usage(format!(
                        "{}:{}: {key} expects true or false, got {other:?}",
                        path.display(),
                        no + 1
                    )))
                }
            }
        } else {
            extra.push(format!("--{key}").into());
            extra.push(value.into());
        }
    }
    let insert_at = 2.min(args.len());
    let mut out = args;
    out.splice(insert_at..insert_at, extra);
    Ok(out)
}

/// Builds a run configuration from flags, on top of the problem defaults.
pub fn build_config(a: &SearchArgs) -> Result<RunConfig, CliError> {
    let kind: ProblemKind = a.problem.into();
    let mut cfg = RunConfig::default();
    apply_problem_defaults(&mut cfg, kind);
    cfg.variant = match a.variant {
        VariantArg::Grasp => Variant::Grasp,
        VariantArg::StaticPr => Variant::StaticPr,
        VariantArg::DynamicPr => Variant::DynamicPr,
        VariantArg::EvolutionaryPr => Variant::EvolutionaryPr,
    };
    if let Some(d) = a.direction {
        cfg.pr.direction = match d {
            DirectionArg::Forward => Direction::Forward,
            DirectionArg::Backward => Direction::Backward,
            DirectionArg::Bf => Direction::BackAndForward,
            DirectionArg::Mixed => Direction::Mixed,
        };
    }
    let step = a.step.unwrap_or(match cfg.pr.step {
        StepSelection::Greedy => StepArg::Greedy,
        StepSelection::GreedyRandomized { .. } => StepArg::Grpr,
    });
    cfg.pr.step = match step {
        StepArg::Greedy => StepSelection::Greedy,
        StepArg::Grpr => StepSelection::GreedyRandomized {
            rcl_size: a.rcl_size,
        },
    };
    cfg.pr.truncation = a.trunc;
    cfg.pr.min_distance = a.min_dist;
    if let Some(p) = a.inpath_ls {
        cfg.pr.in_path_ls = p;
    }
    cfg.depth = match a.depth {
        DepthArg::First => Some(SearchDepth::FirstImproving),
        DepthArg::Best => Some(SearchDepth::BestImproving),
        DepthArg::None => None,
    };
    if let Some(d) = cfg.depth {
        cfg.pr.local_search.depth = d;
    }
    cfg.rcl.alpha_low = a.alpha_min;
    cfg.rcl.alpha_high = a.alpha_max;
    cfg.rcl.mode = match a.rcl_mode {
        RclModeArg::Value => RclMode::ValueThreshold,
        RclModeArg::Card => RclMode::Cardinality,
    };
    cfg.elite_k = a.elite_k;
    cfg.diversity_threshold = a.dth;
    cfg.guide_policy = match a.guide {
        GuideArg::Uniform => GuidePolicy::Uniform,
        GuideArg::Pdelta => GuidePolicy::ProportionalDelta,
    };
    cfg.restart_kappa = a.kappa;
    cfg.iteration_limit = a.iters;
    cfg.time_limit = match (a.time, a.iters) {
        (Some(t), _) => {
            if !(t.is_finite() && t > 0.0) {
                return Err(CliError::usage(format!("--time must be positive, got {t}")));
            }
            Some(Duration::from_secs_f64(t))
        }
        (None, Some(_)) => None,
        (None, None) => Some(Duration::from_secs(60)),
    };
    cfg.seed = a.seed;
    cfg.static_sample = (a.static_sample > 0).then_some(a.static_sample);
    if a.swap_moves {
        cfg.ls_family = MoveFamily::Swap;
        cfg.pr.family = MoveFamily::Swap;
        cfg.pr.local_search.family = MoveFamily::Swap;
    }
    cfg.pr_period = a.pr_period;
    if a.exterior > 0 && a.problem == ProblemArg::Lop {
        return Err(CliError::usage(
            "--exterior is only defined for maxcut (partition) instances",
        ));
    }
    cfg.pr.exterior_steps = a.exterior;
    cfg.validate()?;
    Ok(cfg)
}

fn load(path: &Path, kind: ProblemKind) -> Result<Instance, CliError> {
    load_instance(path, kind).map_err(|e| match e {
        Error::Io(io) => io_error(path, io),
        Error::Parse(p) => CliError {
            code: EXIT_PARSE,
            message: format!("{}: {p}", path.display()),
        },
        other => other.into(),
    })
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| io_error(path, e))
}

struct Summary {
    best_objective: i64,
    iterations: u64,
    restarts: u64,
    elapsed_s: f64,
    solution: String,
    profile: Vec<u8>,
}

fn summarize<S: Solution>(r: RunReport<S>) -> Result<Summary, CliError> {
    let mut profile = Vec::new();
    emit_profile(&r, &mut profile)?;
    Ok(Summary {
        best_objective: r.best_objective,
        iterations: r.iterations,
        restarts: r.restarts,
        elapsed_s: r.elapsed_s,
        solution: r.best_solution.to_line(),
        profile,
    })
}

fn solve_instance(inst: &Instance, cfg: &RunConfig) -> Result<Summary, CliError> {
    match inst {
        Instance::Lop(p) => summarize(run(p, cfg)?),
        Instance::MaxCut(p) => summarize(run(p, cfg)?),
    }
}

fn cmd_solve(a: &SolveArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let cfg = build_config(&a.search)?;
    let inst = load(&a.instance, a.search.problem.into())?;
    let s = solve_instance(&inst, &cfg)?;
    let report = format!(
        "instance: {}\nbest_objective: {}\niterations: {}\nrestarts: {}\nelapsed_s: {:.3}\nsolution: {}\n",
        inst.name(),
        s.best_objective,
        s.iterations,
        s.restarts,
        s.elapsed_s,
        s.solution
    );
    out.write_all(report.as_bytes()).map_err(Error::Io)?;
    if let Some(p) = &a.out {
        write_file(p, format!("{}\n", s.solution).as_bytes())?;
    }
    if let Some(p) = &a.profile {
        write_file(p, &s.profile)?;
    }
    Ok(())
}

fn instance_files(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let entries = fs::read_dir(dir).map_err(|e| io_error(dir, e))?;
    let mut files = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|e| io_error(dir, e))?;
        let path = entry.path();
        let hidden = path
            .file_name()
            .is_some_and(|n| n.to_string_lossy().starts_with('.'));
        if path.is_file() && !hidden {
            files.push(path);
        }
    }
    files.sort();
    if files.is_empty() {
        return Err(CliError::usage(format!(
            "{}: no instance files found",
            dir.display()
        )));
    }
    Ok(files)
}

fn method_specs(
    names: &[String],
    experiment: Option<u8>,
    fallback: &[&str],
    base: &RunConfig,
) -> Result<Vec<MethodSpec>, CliError> {
    let names: Vec<String> = match (names.is_empty(), experiment) {
        (false, Some(_)) => {
            return Err(CliError::usage("--methods and --experiment are mutually exclusive"))
        }
        (false, None) => names.to_vec(),
        (true, Some(e)) => experiment_methods(e)?.iter().map(|s| s.to_string()).collect(),
        (true, None) => fallback.iter().map(|s| s.to_string()).collect(),
    };
    names
        .into_iter()
        .map(|name| {
            let config = preset(&name, base)?;
            config.validate()?;
            Ok(MethodSpec { name, config })
        })
        .collect()
}

fn cmd_bench(a: &BenchArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let base = build_config(&a.search)?;
    let kind: ProblemKind = a.search.problem.into();
    let methods = method_specs(&a.methods, a.experiment, &["custom"], &base)?;
    let instances: Vec<Instance> = instance_files(&a.instances)?
        .iter()
        .map(|p| load(p, kind))
        .collect::<Result<_, _>>()?;
    let seeds = if a.seeds.is_empty() {
        vec![a.search.seed]
    } else {
        a.seeds.clone()
    };
    let rows = run_bench(&instances, &methods, &seeds, a.jobs)?;
    let known = match &a.best_known {
        Some(p) => read_best_known(fs::File::open(p).map_err(|e| io_error(p, e))?)?,
        None => Default::default(),
    };
    let method_names: Vec<String> = methods.iter().map(|m| m.name.clone()).collect();
    let instance_names: Vec<String> = instances.iter().map(|i| i.name().to_string()).collect();
    let stats = compute_stats(&method_names, &instance_names, &aggregate_seeds(&rows), &known)?;
    let mut stats_csv = Vec::new();
    write_stats_csv(&stats, &mut stats_csv)?;
    out.write_all(&stats_csv).map_err(Error::Io)?;
    if let Some(dir) = &a.out {
        fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
        let mut results = Vec::new();
        write_results_csv(&rows, &mut results)?;
        write_file(&dir.join("results.csv"), &results)?;
        write_file(&dir.join("stats.csv"), &stats_csv)?;
    }
    Ok(())
}

fn cmd_profile(a: &ProfileArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let base = build_config(&a.search)?;
    let methods = method_specs(
        &a.methods,
        None,
        experiment_methods(7).expect("experiment 7 exists"),
        &base,
    )?;
    let inst = load(&a.instance, a.search.problem.into())?;
    fs::create_dir_all(&a.out).map_err(|e| io_error(&a.out, e))?;
    for m in &methods {
        let s = solve_instance(&inst, &m.config)?;
        let path = a.out.join(format!("{}.csv", m.name));
        write_file(&path, &s.profile)?;
        writeln!(out, "{}: best_objective {} -> {}", m.name, s.best_objective, path.display())
            .map_err(Error::Io)?;
    }
    Ok(())
}

fn infer_problem(path: &Path) -> ProblemKind {
    let ext = path
        .extension()
        .map(|e| e.to_string_lossy().to_ascii_lowercase())
        .unwrap_or_default();
    match ext.as_str() {
        "el" | "edges" | "gset" => ProblemKind::MaxCut,
        _ => ProblemKind::Lop,
    }
}

fn cmd_validate(a: &ValidateArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let kind = a
        .problem
        .map(ProblemKind::from)
        .unwrap_or_else(|| infer_problem(&a.instance));
    let inst = load(&a.instance, kind)?;
    writeln!(out, "{}", inst.summary()).map_err(Error::Io)?;
    Ok(())
}

/// Runs the command line in `args` (program name first) and returns the
/// process exit code.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let args = match expand_config(args) {
        Ok(a) => a,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            return e.code;
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    let result = match &cli.command {
        Command::Solve(a) => cmd_solve(a, out),
        Command::Bench(a) => cmd_bench(a, out),
        Command::Profile(a) => cmd_profile(a, out),
        Command::Validate(a) => cmd_validate(a, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}
