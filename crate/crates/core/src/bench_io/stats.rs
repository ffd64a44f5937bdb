//! Per-method summary statistics and CSV output.

use std::collections::HashMap;
use std::io::{Read, Write};

use crate::core::Objective;
use crate::drivers::RunReport;
use crate::error::{Error, Result};

/// One benchmark cell.
#[derive(Clone, Debug, PartialEq)]
pub struct ResultRow {
    pub method: String,
    pub instance: String,
    pub seed: u64,
    pub best_objective: Objective,
    pub iterations: u64,
    pub elapsed_s: f64,
    pub restarts: u64,
}

pub const RESULTS_HEADER: [&str; 7] = [
    "method",
    "instance",
    "seed",
    "best_objective",
    "iterations",
    "elapsed_s",
    "restarts",
];

pub const STATS_HEADER: [&str; 5] = ["method", "#Best", "%Dev", "#Best_k", "%Dev_k"];

#[derive(Clone, Debug, PartialEq)]
pub struct MethodStats {
    pub method: String,
    /// Instances where the method matches the best value of the experiment.
    pub best: usize,
    /// Mean percentage deviation from the experiment best; `None` when no
    /// instance has a positive experiment best.
    pub dev: Option<f64>,
    /// Instances where the method reaches the best known value.
    pub best_k: Option<usize>,
    pub dev_k: Option<f64>,
    /// Deviation per instance, in instance order.
    pub deviations: Vec<Option<f64>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentStats {
    pub instances: Vec<String>,
    /// Experiment best per instance, in instance order.
    pub experiment_best: Vec<Objective>,
    pub rows: Vec<MethodStats>,
}

impl ExperimentStats {
    pub fn row(&self, method: &str) -> Option<&MethodStats> {
        self.rows.iter().find(|r| r.method == method)
    }
}

fn deviation(reference: Objective, value: Objective) -> Option<f64> {
    (reference > 0).then(|| 100.0 * (reference - value) as f64 / reference as f64)
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, count) = values.fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
    (count > 0).then(|| sum / count as f64)
}

/// Best objective per `(method, instance)` over all seeds.
pub fn aggregate_seeds(rows: &[ResultRow]) -> HashMap<(String, String), Objective> {
    let mut out: HashMap<(String, String), Objective> = HashMap::new();
    for r in rows {
        out.entry((r.method.clone(), r.instance.clone()))
            .and_modify(|v| *v = (*v).max(r.best_objective))
            .or_insert(r.best_objective);
    }
    out
}

/// Summary table over a complete `methods x instances` grid.
///
/// Deviations are only defined for positive references; instances with a
/// non-positive reference are left out of the means. The `_k` columns are
/// filled only when `best_known` has an entry for some instance.
pub fn compute_stats(
    methods: &[String],
    instances: &[String],
    values: &HashMap<(String, String), Objective>,
    best_known: &HashMap<String, Objective>,
) -> Result<ExperimentStats> {
    let cell = |m: &String, i: &String| -> Result<Objective> {
        values
            .get(&(m.clone(), i.clone()))
            .copied()
            .ok_or_else(|| Error::Stats(format!("missing result for method {m} on instance {i}")))
    };
    let mut experiment_best = Vec::with_capacity(instances.len());
    for i in instances {
        let mut best: Option<Objective> = None;
        for m in methods {
            let v = cell(m, i)?;
            best = Some(best.map_or(v, |b| b.max(v)));
        }
        experiment_best.push(best.ok_or_else(|| Error::Stats("no methods".into()))?);
    }
    let with_known = instances.iter().any(|i| best_known.contains_key(i));
    let mut rows = Vec::with_capacity(methods.len());
    for m in methods {
        let mut best = 0;
        let mut deviations = Vec::with_capacity(instances.len());
        let mut best_k = 0;
        let mut devs_k = Vec::new();
        for (k, i) in instances.iter().enumerate() {
            let v = cell(m, i)?;
            if v == experiment_best[k] {
                best += 1;
            }
            deviations.push(deviation(experiment_best[k], v));
            if let Some(&bk) = best_known.get(i) {
                if v >= bk {
                    best_k += 1;
                }
                if let Some(d) = deviation(bk, v) {
                    devs_k.push(d);
                }
            }
        }
        rows.push(MethodStats {
            method: m.clone(),
            best,
            dev: mean(deviations.iter().flatten().copied()),
            best_k: with_known.then_some(best_k),
            dev_k: if with_known { mean(devs_k.into_iter()) } else { None },
            deviations,
        });
    }
    Ok(ExperimentStats {
        instances: instances.to_vec(),
        experiment_best,
        rows,
    })
}

fn fmt_opt_f(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".to_string(), |d| format!("{d:.4}"))
}

pub fn write_results_csv<W: Write>(rows: &[ResultRow], sink: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(RESULTS_HEADER)?;
    for r in rows {
        w.write_record([
            r.method.clone(),
            r.instance.clone(),
            r.seed.to_string(),
            r.best_objective.to_string(),
            r.iterations.to_string(),
            format!("{:.6}", r.elapsed_s),
            r.restarts.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_stats_csv<W: Write>(stats: &ExperimentStats, sink: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(STATS_HEADER)?;
    for r in &stats.rows {
        w.write_record([
            r.method.clone(),
            r.best.to_string(),
            fmt_opt_f(r.dev),
            r.best_k.map_or_else(|| "NA".to_string(), |b| b.to_string()),
            fmt_opt_f(r.dev_k),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads `instance,best_known` rows; a header row is optional.
pub fn read_best_known<R: Read>(source: R) -> Result<HashMap<String, Objective>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(source);
    let mut out = HashMap::new();
    for (k, record) in reader.records().enumerate() {
        let record = record?;
        if record.len() != 2 {
            return Err(Error::Stats(format!(
                "best-known row {} must have 2 fields, found {}",
                k + 1,
                record.len()
            )));
        }
        match record[1].parse::<Objective>() {
            Ok(v) => {
                out.insert(record[0].to_string(), v);
            }
            Err(_) if k == 0 => continue,
            Err(_) => {
                return Err(Error::Stats(format!(
                    "best-known row {}: {:?} is not an integer",
                    k + 1,
                    &record[1]
                )))
            }
        }
    }
    Ok(out)
}

/// Writes the incumbent trajectory of a run: one row per improvement and a
/// final row at termination.
pub fn emit_profile<S, W: Write>(report: &RunReport<S>, sink: W) -> Result<()> {
    write_profile(&report.incumbent_series, report.elapsed_s, sink)
}

pub fn write_profile<W: Write>(series: &[(f64, Objective)], end_s: f64, sink: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["elapsed_s", "objective"])?;
    for &(t, f) in series {
        w.write_record([format!("{t:.6}"), f.to_string()])?;
    }
    if let Some(&(t, f)) = series.last() {
        w.write_record([format!("{:.6}", end_s.max(t)), f.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn grid(cells: &[(&str, &str, Objective)]) -> HashMap<(String, String), Objective> {
        cells
            .iter()
            .map(|&(m, i, v)| ((m.to_string(), i.to_string()), v))
            .collect()
    }

    #[test]
    fn single_method_is_always_best() {
        let values = grid(&[("a", "x", 5), ("a", "y", -3), ("a", "z", 0)]);
        let s = compute_stats(&names(&["a"]), &names(&["x", "y", "z"]), &values, &HashMap::new()).unwrap();
        assert_eq!(s.rows[0].best, 3);
        assert_eq!(s.rows[0].dev, Some(0.0));
        assert_eq!(s.rows[0].best_k, None);
    }

    #[test]
    fn two_method_deviation() {
        let values = grid(&[("a", "x", 100), ("b", "x", 95)]);
        let s = compute_stats(&names(&["a", "b"]), &names(&["x"]), &values, &HashMap::new()).unwrap();
        assert_eq!(s.rows[0].dev, Some(0.0));
        assert!((s.rows[1].dev.unwrap() - 5.0).abs() < 1e-12);
        assert_eq!((s.rows[0].best, s.rows[1].best), (1, 0));
    }

    #[test]
    fn non_positive_reference_is_not_applicable() {
        let values = grid(&[("a", "x", 0), ("b", "x", -4)]);
        let s = compute_stats(&names(&["a", "b"]), &names(&["x"]), &values, &HashMap::new()).unwrap();
        assert_eq!(s.rows[1].dev, None);
        assert_eq!(s.rows[1].deviations, vec![None]);
        assert_eq!(s.rows[0].best, 1);
    }

    #[test]
    fn best_known_columns() {
        let values = grid(&[("a", "x", 90), ("a", "y", 50)]);
        let known: HashMap<String, Objective> = [("x".to_string(), 100)].into_iter().collect();
        let s = compute_stats(&names(&["a"]), &names(&["x", "y"]), &values, &known).unwrap();
        assert_eq!(s.rows[0].best_k, Some(0));
        assert!((s.rows[0].dev_k.unwrap() - 10.0).abs() < 1e-12);
    }

    #[test]
    fn missing_cells_are_errors() {
        let values = grid(&[("a", "x", 1)]);
        assert!(compute_stats(&names(&["a", "b"]), &names(&["x"]), &values, &HashMap::new()).is_err());
    }

    #[test]
    fn ties_count_for_every_tied_method() {
        let values = grid(&[("a", "x", 7), ("b", "x", 7), ("c", "x", 6)]);
        let s = compute_stats(&names(&["a", "b", "c"]), &names(&["x"]), &values, &HashMap::new()).unwrap();
        let total: usize = s.rows.iter().map(|r| r.best).sum();
        assert_eq!(total, 2);
    }

    #[test]
    fn seeds_aggregate_by_maximum() {
        let row = |seed, v| ResultRow {
            method: "m".into(),
            instance: "i".into(),
            seed,
            best_objective: v,
            iterations: 1,
            elapsed_s: 0.0,
            restarts: 0,
        };
        let agg = aggregate_seeds(&[row(1, 4), row(2, 9), row(3, 2)]);
        assert_eq!(agg[&("m".to_string(), "i".to_string())], 9);
    }

    #[test]
    fn profile_rows() {
        let mut buf = Vec::new();
        write_profile(&[(0.0, 10), (0.5, 12)], 2.0, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "elapsed_s,objective\n0.000000,10\n0.500000,12\n2.000000,12\n"
        );
    }

    #[test]
    fn stats_csv_layout() {
        let values = grid(&[("a", "x", 100), ("b", "x", 95)]);
        let s = compute_stats(&names(&["a", "b"]), &names(&["x"]), &values, &HashMap::new()).unwrap();
        let mut buf = Vec::new();
        write_stats_csv(&s, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "method,#Best,%Dev,#Best_k,%Dev_k\na,1,0.0000,NA,NA\nb,0,5.0000,NA,NA\n"
        );
    }

    #[test]
    fn best_known_file_with_optional_header() {
        let known = read_best_known("instance,best_known\nx, 10\ny,20\n".as_bytes()).unwrap();
        assert_eq!(known["x"], 10);
        assert_eq!(known["y"], 20);
        assert!(read_best_known("x,1\ny,z\n".as_bytes()).is_err());
    }
}
