//! End-to-end runs of the `grasppr` binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn instances(kind: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../instances").join(kind)
}

fn grasppr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_grasppr"))
        .args(args)
        .env_remove("RUST_LOG")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn field<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix(": ")))
        .unwrap_or_else(|| panic!("no {key} in {text:?}"))
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn triangle_cut_is_two() {
    let k3 = instances("maxcut").join("k3.el");
    let o = grasppr(&["solve", "--problem", "maxcut", "--instance", p(&k3), "--iters", "10"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert_eq!(field(&text, "best_objective"), "2");
    assert_eq!(field(&text, "instance"), "k3");
    assert_eq!(field(&text, "iterations"), "10");
}

#[test]
fn greedy_single_iteration_is_reproducible() {
    let mat = instances("lop").join("toy8.mat");
    let args = [
        "solve", "--problem", "lop", "--instance", p(&mat), "--variant", "grasp", "--iters", "1",
        "--alpha-max", "0", "--seed", "7",
    ];
    let a = stdout(&grasppr(&args));
    let b = stdout(&grasppr(&[&args[..11], &["--seed", "8"]].concat()));
    assert_eq!(field(&a, "solution"), field(&b, "solution"));
    assert_eq!(field(&a, "best_objective"), field(&b, "best_objective"));
}

#[test]
fn equal_seeds_give_equal_runs() {
    let mat = instances("lop").join("toy10.mat");
    let args = [
        "solve", "--problem", "lop", "--instance", p(&mat), "--variant", "evolutionary_pr",
        "--iters", "25", "--seed", "3",
    ];
    let (a, b) = (stdout(&grasppr(&args)), stdout(&grasppr(&args)));
    for key in ["best_objective", "iterations", "restarts", "solution"] {
        assert_eq!(field(&a, key), field(&b, key));
    }
}

#[test]
fn solution_and_profile_files_are_written() {
    let tmp = tempfile::tempdir().unwrap();
    let (sol, prof) = (tmp.path().join("best.txt"), tmp.path().join("profile.csv"));
    let el = instances("maxcut").join("rand12.el");
    let o = grasppr(&[
        "solve", "--problem", "maxcut", "--instance", p(&el), "--iters", "30", "--out", p(&sol),
        "--profile", p(&prof),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let line = fs::read_to_string(&sol).unwrap();
    assert_eq!(line.trim(), field(&stdout(&o), "solution"));
    let profile = fs::read_to_string(&prof).unwrap();
    assert!(profile.starts_with("elapsed_s,objective\n"));
    let last = profile.lines().last().unwrap();
    assert_eq!(last.split(',').nth(1).unwrap(), field(&stdout(&o), "best_objective"));
}

#[test]
fn config_file_supplies_defaults_and_flags_override_it() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("run.cfg");
    fs::write(&cfg, "# small run\niters = 4\nseed=9\nvariant = grasp\n").unwrap();
    let el = instances("maxcut").join("ring8.el");
    let o = grasppr(&["solve", "--problem", "maxcut", "--instance", p(&el), "--config", p(&cfg)]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(field(&stdout(&o), "iterations"), "4");
    let o = grasppr(&[
        "solve", "--problem", "maxcut", "--instance", p(&el), "--config", p(&cfg), "--iters", "6",
    ]);
    assert_eq!(field(&stdout(&o), "iterations"), "6");
    // An even ring is bipartite, so every edge can be cut.
    assert_eq!(field(&stdout(&o), "best_objective"), "8");
}

#[test]
fn validate_summarizes_instances() {
    let o = grasppr(&["validate", "--instance", p(&instances("maxcut").join("k3.el"))]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "maxcut n=3 edges=3 weights=[1,1]");
    let o = grasppr(&["validate", "--instance", p(&instances("lop").join("toy6.mat"))]);
    assert!(stdout(&o).starts_with("lop n=6 entries=36"));
}

#[test]
fn malformed_instance_exits_with_parse_code() {
    let tmp = tempfile::tempdir().unwrap();
    let bad = tmp.path().join("bad.mat");
    fs::write(&bad, "bad\n2\n0 1\n2 x\n").unwrap();
    let o = grasppr(&["validate", "--instance", p(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 4, column 3"), "{}", stderr(&o));
}

#[test]
fn usage_errors_exit_with_64() {
    let o = grasppr(&["solve", "--problem", "lop"]);
    assert_eq!(o.status.code(), Some(64));
    let o = grasppr(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(64));
    let mat = instances("lop").join("toy6.mat");
    let o = grasppr(&["solve", "--problem", "lop", "--instance", p(&mat), "--trunc", "1.5"]);
    assert_eq!(o.status.code(), Some(64), "{}", stderr(&o));
    let o = grasppr(&[
        "solve", "--problem", "lop", "--instance", p(&mat), "--iters", "3", "--exterior", "2",
    ]);
    assert_eq!(o.status.code(), Some(64), "{}", stderr(&o));
}

#[test]
fn missing_files_exit_with_74() {
    let o = grasppr(&["validate", "--instance", "/nonexistent/file.mat"]);
    assert_eq!(o.status.code(), Some(74));
    let o = grasppr(&["bench", "--problem", "lop", "--instances", "/nonexistent", "--iters", "1"]);
    assert_eq!(o.status.code(), Some(74));
}

#[test]
fn bench_writes_results_and_stats() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("run");
    let o = grasppr(&[
        "bench", "--problem", "lop", "--instances", p(&instances("lop")), "--experiment", "2",
        "--seeds", "1,2", "--iters", "5", "--out", p(&out),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let stats = fs::read_to_string(out.join("stats.csv")).unwrap();
    assert_eq!(stats, stdout(&o));
    assert!(stats.starts_with("method,#Best,%Dev,#Best_k,%Dev_k\ngrasp_first,"));
    let results = fs::read_to_string(out.join("results.csv")).unwrap();
    let mut lines = results.lines();
    assert_eq!(
        lines.next(),
        Some("method,instance,seed,best_objective,iterations,elapsed_s,restarts")
    );
    assert_eq!(lines.count(), 2 * 3 * 2);
}
