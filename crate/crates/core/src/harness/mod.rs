//! Declarative experiments: JSON configs in, CSV series and a JSON summary
//! out.
//!
//! A config expands into independent sweep points which run on a worker
//! pool; their rows are merged in config order, so outputs do not depend on
//! the worker count. A point that exceeds the budget is recorded as skipped
//! and the rest of the sweep continues.

mod builtin;
mod config;
mod kinds;
mod plot;

use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::Serialize;

pub use builtin::{builtin_experiment, builtin_experiments, BuiltinExperiment};
pub use config::{
    apply_override, Bath, BudgetConfig, Experiment, ExperimentConfig, IntSet, KappaRule,
};
pub use plot::emit_plot_data;

use crate::error::{CatError, Result};
use crate::io::{write_atomic, CsvTable};

/// One named output table.
#[derive(Clone, Debug)]
pub struct Series {
    pub name: String,
    pub table: CsvTable,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SkippedPoint {
    pub point: String,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Provenance {
    pub package: &'static str,
    pub version: &'static str,
    pub timestamp_unix: u64,
    pub wall_seconds: f64,
    pub workers: usize,
}

/// Everything one run produced.
#[derive(Clone, Debug)]
pub struct ResultSet {
    pub config: ExperimentConfig,
    pub series: Vec<Series>,
    pub skipped: Vec<SkippedPoint>,
    pub violations: Vec<String>,
    /// Derived scalars (fits, extrema) keyed by name.
    pub metrics: Vec<(String, f64)>,
    pub provenance: Provenance,
}

impl ResultSet {
    pub fn series(&self, name: &str) -> Option<&CsvTable> {
        self.series.iter().find(|s| s.name == name).map(|s| &s.table)
    }

    pub fn metric(&self, name: &str) -> Option<f64> {
        self.metrics.iter().find(|(k, _)| k == name).map(|&(_, v)| v)
    }

    pub fn file_name(&self, series: &str) -> String {
        format!("{}_{series}.csv", self.config.name)
    }

    /// Process exit status: 3 on invariant violations, 2 if a point was
    /// skipped, 0 otherwise.
    pub fn exit_code(&self) -> i32 {
        if !self.violations.is_empty() {
            3
        } else if !self.skipped.is_empty() {
            2
        } else {
            0
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct RunOptions {
    /// Worker threads; `None` uses all cores.
    pub workers: Option<usize>,
}

/// Rows and diagnostics of one sweep point.
#[derive(Debug, Default)]
pub(crate) struct PointOutput {
    pub rows: Vec<(usize, Vec<String>)>,
    pub skipped: Vec<SkippedPoint>,
    pub violations: Vec<String>,
    pub metrics: Vec<(String, f64)>,
}

impl PointOutput {
    pub fn row(&mut self, series: usize, cells: Vec<String>) {
        self.rows.push((series, cells));
    }

    /// Sorts an error into skipped (budget) or violations (invariants);
    /// anything else is returned.
    pub fn absorb(&mut self, point: &str, err: CatError) -> Result<()> {
        match err {
            CatError::BudgetExceeded { .. } => {
                self.skipped.push(SkippedPoint {
                    point: point.to_string(),
                    reason: err.to_string(),
                });
                Ok(())
            }
            CatError::InvariantViolation(_)
            | CatError::NegativeEigenvalue { .. }
            | CatError::NotHermitian { .. } => {
                self.violations.push(format!("{point}: {err}"));
                Ok(())
            }
            other => Err(other),
        }
    }
}

pub(crate) type Job<'a> = (String, Box<dyn Fn() -> Result<PointOutput> + Send + Sync + 'a>);
pub(crate) type Finish<'a> = Box<dyn Fn(&mut PointOutput) + 'a>;

/// The work of one experiment: series headers plus the jobs filling them.
pub(crate) struct Plan<'a> {
    pub series: Vec<(&'static str, Vec<&'static str>)>,
    pub jobs: Vec<Job<'a>>,
    /// Derives extra series rows and metrics from the merged output.
    pub finish: Option<Finish<'a>>,
}

/// Validates, executes and merges one experiment. Nothing is written.
pub fn run(config: &ExperimentConfig, opts: &RunOptions) -> Result<ResultSet> {
    config.validate()?;
    let start = Instant::now();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(k) = opts.workers {
        if k == 0 {
            return Err(CatError::ConfigInvalid("worker count must be ≥ 1".into()));
        }
        builder = builder.num_threads(k);
    }
    let pool = builder
        .build()
        .map_err(|e| CatError::InvariantViolation(format!("thread pool: {e}")))?;
    let workers = pool.current_num_threads();
    let comment = format!("config: {}", serde_json::to_string(config)?);

    let (series, merged) = pool.install(|| -> Result<_> {
        let plan = kinds::plan(config)?;
        let outputs: Vec<Result<PointOutput>> =
            plan.jobs.par_iter().map(|(_, job)| job()).collect();
        let mut merged = PointOutput::default();
        for ((label, _), out) in plan.jobs.iter().zip(outputs) {
            match out {
                Ok(o) => {
                    merged.rows.extend(o.rows);
                    merged.skipped.extend(o.skipped);
                    merged.violations.extend(o.violations);
                    merged.metrics.extend(o.metrics);
                }
                Err(e) => merged.absorb(label, e)?,
            }
        }
        if let Some(finish) = &plan.finish {
            finish(&mut merged);
        }
        Ok((plan.series, merged))
    })?;

    let mut tables: Vec<Series> = series
        .iter()
        .map(|(name, header)| Series {
            name: name.to_string(),
            table: CsvTable::new(header.iter().copied()).with_comment(comment.clone()),
        })
        .collect();
    for (idx, row) in merged.rows {
        tables[idx].table.push(row);
    }
    Ok(ResultSet {
        config: config.clone(),
        series: tables,
        skipped: merged.skipped,
        violations: merged.violations,
        metrics: merged.metrics,
        provenance: Provenance {
            package: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            timestamp_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            wall_seconds: start.elapsed().as_secs_f64(),
            workers,
        },
    })
}

#[derive(Serialize)]
struct SeriesEntry<'a> {
    name: &'a str,
    file: String,
    rows: usize,
}

#[derive(Serialize)]
struct Summary<'a> {
    name: &'a str,
    kind: &'static str,
    figure: Option<&'a str>,
    config: &'a ExperimentConfig,
    series: Vec<SeriesEntry<'a>>,
    metrics: serde_json::Map<String, serde_json::Value>,
    skipped: &'a [SkippedPoint],
    violations: &'a [String],
    provenance: &'a Provenance,
}

/// Writes every series as `<name>_<series>.csv` and the summary as
/// `<name>_summary.json` into `dir`, each file atomically. Returns the
/// paths in write order.
pub fn write_result(rs: &ResultSet, dir: &Path) -> Result<Vec<PathBuf>> {
    let mut paths = Vec::new();
    for s in &rs.series {
        let path = dir.join(rs.file_name(&s.name));
        s.table.write_atomic(&path)?;
        paths.push(path);
    }
    let summary = Summary {
        name: &rs.config.name,
        kind: rs.config.kind(),
        figure: rs.config.figure.as_deref(),
        config: &rs.config,
        series: rs
            .series
            .iter()
            .map(|s| SeriesEntry {
                name: &s.name,
                file: rs.file_name(&s.name),
                rows: s.table.len(),
            })
            .collect(),
        metrics: rs
            .metrics
            .iter()
            .map(|(k, v)| {
                let v = serde_json::Number::from_f64(*v)
                    .map(serde_json::Value::Number)
                    .unwrap_or(serde_json::Value::Null);
                (k.clone(), v)
            })
            .collect(),
        skipped: &rs.skipped,
        violations: &rs.violations,
        provenance: &rs.provenance,
    };
    let path = dir.join(format!("{}_summary.json", rs.config.name));
    let mut text = serde_json::to_string_pretty(&summary)?;
    text.push('\n');
    write_atomic(&path, text.as_bytes())?;
    paths.push(path);
    Ok(paths)
}

#[cfg(test)]
mod tests;
