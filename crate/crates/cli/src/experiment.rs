//! Batch runs over generated instance sets, summarised per set as solved
//! counts and mean ± sd of time and iterations.

use std::fmt;
use std::path::Path;
use std::time::Duration;

use hamdec_core::{generate_instance, Algorithm, HeuristicParams, InstanceKind, InstanceSpec};
use rayon::prelude::*;
use serde::Deserialize;

use crate::commands::{instance_id, solve_instance, Job};
use crate::files::{append_rows, ResultRow};
use crate::CliError;

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetConfig {
    pub kind: String,
    pub n: usize,
    pub count: usize,
    pub directed: bool,
    pub algorithms: Vec<String>,
    /// wall-clock budget for the whole set, shared evenly between its instances
    pub per_set_time_limit_ms: u64,
    pub seed: u64,
    /// overrides the even share of the set budget
    #[serde(default)]
    pub per_instance_time_limit_ms: Option<u64>,
    #[serde(default)]
    pub attempt_limit: Option<usize>,
    #[serde(default)]
    pub depth_limit: Option<usize>,
}

impl SetConfig {
    pub fn instance_budget(&self) -> Duration {
        let ms = self
            .per_instance_time_limit_ms
            .unwrap_or(self.per_set_time_limit_ms / self.count.max(1) as u64);
        Duration::from_millis(ms)
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(transparent)]
pub struct ExperimentConfig {
    pub sets: Vec<SetConfig>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text)
            .map_err(|e| CliError::Usage(format!("malformed experiment config: {e}")))
    }
}

struct Task {
    set: usize,
    kind: InstanceKind,
    spec: InstanceSpec,
    index: usize,
    algorithm: Algorithm,
    params: HeuristicParams,
    budget: Duration,
}

fn plan(config: &ExperimentConfig) -> Result<Vec<Task>, CliError> {
    let mut tasks = Vec::new();
    for (set, sc) in config.sets.iter().enumerate() {
        let kind: InstanceKind = sc.kind.parse()?;
        InstanceSpec::new(kind, sc.n, sc.directed, sc.seed).validate()?;
        let algorithms = sc
            .algorithms
            .iter()
            .map(|a| a.parse::<Algorithm>())
            .collect::<Result<Vec<_>, _>>()?;
        if let Some(a) = algorithms.iter().find(|a| !a.supports(sc.directed)) {
            return Err(CliError::Usage(format!(
                "set {set}: {a} does not support directed = {}",
                sc.directed
            )));
        }
        let defaults = HeuristicParams::default();
        for index in 0..sc.count {
            let seed = sc.seed.wrapping_add(index as u64);
            for &algorithm in &algorithms {
                let params = HeuristicParams {
                    attempt_limit: sc.attempt_limit.unwrap_or(defaults.attempt_limit),
                    depth_limit: sc.depth_limit.unwrap_or(defaults.depth_limit),
                    seed,
                    ..defaults
                };
                params.validate()?;
                tasks.push(Task {
                    set,
                    kind,
                    spec: InstanceSpec::new(kind, sc.n, sc.directed, seed),
                    index,
                    algorithm,
                    params,
                    budget: sc.instance_budget(),
                });
            }
        }
    }
    Ok(tasks)
}

/// Runs every (set, instance, algorithm) cell; rows come back in plan order
/// whatever the thread count.
pub fn run_experiment(
    config: &ExperimentConfig,
    no_timing: bool,
    threads: Option<usize>,
) -> Result<Vec<ResultRow>, CliError> {
    let tasks = plan(config)?;
    let work = || {
        tasks
            .par_iter()
            .map(|t| {
                let inst = generate_instance(t.spec)?;
                let id = format!(
                    "s{}_{}",
                    t.set,
                    instance_id(t.kind, t.spec.n, t.spec.directed, t.index)
                );
                let solved = solve_instance(Job {
                    inst: &inst,
                    instance_id: id,
                    generator: t.kind.to_string(),
                    algorithm: t.algorithm,
                    params: t.params,
                    budget: t.budget,
                    no_timing,
                    want_lp: false,
                })?;
                Ok(solved.row)
            })
            .collect::<Result<Vec<_>, CliError>>()
    };
    match threads {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?
            .install(work),
        None => work(),
    }
}

/// Sample mean and standard deviation (n - 1 denominator, 0 for fewer than two values).
pub fn mean_sd(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let k = values.len() as f64;
    let mean = values.iter().sum::<f64>() / k;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1.0);
    (mean, var.sqrt())
}

#[derive(Clone, Debug, PartialEq)]
pub struct SummaryLine {
    pub generator: String,
    pub n: usize,
    pub directed: bool,
    pub algorithm: String,
    pub total: usize,
    /// runs that ended with a verdict inside the budget
    pub solved: usize,
    pub feasible: usize,
    /// over solved runs, in seconds
    pub time_s: (f64, f64),
    pub iterations: (f64, f64),
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Summary {
    pub lines: Vec<SummaryLine>,
}

impl Summary {
    /// Groups rows by (generator, n, directed, algorithm) in first-seen order.
    pub fn from_rows(rows: &[ResultRow]) -> Self {
        let mut groups: Vec<(&ResultRow, Vec<&ResultRow>)> = Vec::new();
        for row in rows {
            let same = |r: &ResultRow| {
                r.generator == row.generator
                    && r.n == row.n
                    && r.directed == row.directed
                    && r.algorithm == row.algorithm
            };
            match groups.iter_mut().find(|(key, _)| same(key)) {
                Some((_, members)) => members.push(row),
                None => groups.push((row, vec![row])),
            }
        }
        let lines = groups
            .into_iter()
            .map(|(key, members)| {
                let solved: Vec<_> = members.iter().filter(|r| r.verdict != "timeout").collect();
                let times: Vec<f64> = solved.iter().map(|r| r.time_ms as f64 / 1000.0).collect();
                let iters: Vec<f64> = solved.iter().map(|r| r.iterations as f64).collect();
                SummaryLine {
                    generator: key.generator.clone(),
                    n: key.n,
                    directed: key.directed,
                    algorithm: key.algorithm.clone(),
                    total: members.len(),
                    solved: solved.len(),
                    feasible: members.iter().filter(|r| r.verdict == "feasible").count(),
                    time_s: mean_sd(&times),
                    iterations: mean_sd(&iters),
                }
            })
            .collect();
        Summary { lines }
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<10} {:>5} {:>4} {:<12} {:>9} {:>8} {:>20} {:>16}",
            "generator", "n", "dir", "algorithm", "solved", "feasible", "time (s)", "iter"
        )?;
        for l in &self.lines {
            writeln!(
                f,
                "{:<10} {:>5} {:>4} {:<12} {:>9} {:>8} {:>20} {:>16}",
                l.generator,
                l.n,
                if l.directed { "yes" } else { "no" },
                l.algorithm,
                format!("{}/{}", l.solved, l.total),
                l.feasible,
                format!("{:.3} ± {:.3}", l.time_s.0, l.time_s.1),
                format!("{:.2} ± {:.2}", l.iterations.0, l.iterations.1),
            )?;
        }
        Ok(())
    }
}

/// Reads the config, runs it, appends rows to `out_csv` and returns the summary.
pub fn cmd_experiment(
    config_path: &Path,
    out_csv: &Path,
    no_timing: bool,
    threads: Option<usize>,
) -> Result<(Vec<ResultRow>, Summary), CliError> {
    let text = std::fs::read_to_string(config_path).map_err(|e| CliError::io(config_path, e))?;
    let config = ExperimentConfig::from_json(&text)?;
    let rows = run_experiment(&config, no_timing, threads)?;
    append_rows(out_csv, &rows)?;
    let summary = Summary::from_rows(&rows);
    Ok((rows, summary))
}
