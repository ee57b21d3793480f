//! Report types, output files and the top-level `run`.

use crate::config::ExperimentConfig;
use crate::error::HarnessError;
use crate::experiments;
use crate::parallel::Parallel;
use crate::plot::{emit_plot_data, PlotData, PlotKind};
use serde::Serialize;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

/// One estimator; the column order is the CSV schema.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub experiment: &'static str,
    pub event: String,
    pub alpha: f64,
    pub gamma: f64,
    pub n: u64,
    pub reps: u64,
    pub estimate: f64,
    pub se: f64,
    pub asymptote: f64,
    pub ratio: f64,
}

impl Row {
    /// Fills `ratio` as `estimate / asymptote`, or `NaN` without a positive asymptote.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        experiment: &'static str,
        event: impl Into<String>,
        alpha: f64,
        gamma: f64,
        n: u64,
        reps: u64,
        estimate: f64,
        se: f64,
        asymptote: f64,
    ) -> Self {
        let ratio = if asymptote > 0.0 { estimate / asymptote } else { f64::NAN };
        Self {
            experiment,
            event: event.into(),
            alpha,
            gamma,
            n,
            reps,
            estimate,
            se,
            asymptote,
            ratio,
        }
    }
}

/// A threshold test evaluated by `--check`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubSeed {
    pub n: u64,
    pub seed: u64,
}

/// An auxiliary CSV file.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub csv: Vec<u8>,
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    pub rows: Vec<Row>,
    pub tables: Vec<Table>,
    pub checks: Vec<Check>,
    pub plots: Vec<PlotData>,
    pub sub_seeds: Vec<SubSeed>,
}

impl Report {
    pub fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// The main CSV.
    pub fn csv_bytes(&self) -> Result<Vec<u8>, HarnessError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in &self.rows {
            w.serialize(row)?;
        }
        w.into_inner().map_err(|e| HarnessError::io(Path::new("<csv>"), e.into_error()))
    }
}

#[derive(Serialize)]
struct Manifest<'a> {
    config: &'a ExperimentConfig,
    version: &'static str,
    seed: u64,
    sub_seeds: &'a [SubSeed],
    threads: Option<usize>,
    wall_time_secs: f64,
    outputs: Vec<String>,
    checks: &'a [Check],
}

/// Where a finished run left its files.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub report: Report,
    pub csv_path: PathBuf,
    pub manifest_path: PathBuf,
    pub files: Vec<PathBuf>,
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), HarnessError> {
    fs::write(path, bytes).map_err(|e| HarnessError::io(path, e))
}

/// Validates, runs and writes one experiment: `<name>.csv`, any auxiliary
/// tables, the requested plot files and `<name>_manifest.json`.
pub fn run(config: &ExperimentConfig, threads: Option<usize>, plots: &[PlotKind]) -> Result<RunOutcome, HarnessError> {
    config.validate()?;
    let exec = match threads {
        Some(t) => Parallel::with_threads(t).map_err(|e| HarnessError::Config(e.to_string()))?,
        None => Parallel::global(),
    };
    let start = Instant::now();
    let report = experiments::execute(config, &exec)?;
    let wall = start.elapsed().as_secs_f64();

    let dir = &config.output_dir;
    fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    let name = config.experiment.name();
    let csv_path = dir.join(format!("{name}.csv"));
    write(&csv_path, &report.csv_bytes()?)?;
    let mut files = vec![csv_path.clone()];
    for t in &report.tables {
        let p = dir.join(format!("{}.csv", t.name));
        write(&p, &t.csv)?;
        files.push(p);
    }
    for &kind in plots {
        files.extend(emit_plot_data(&report, kind, &dir.join("plots"))?);
    }
    let manifest_path = dir.join(format!("{name}_manifest.json"));
    let manifest = Manifest {
        config,
        version: env!("CARGO_PKG_VERSION"),
        seed: config.seed,
        sub_seeds: &report.sub_seeds,
        threads,
        wall_time_secs: wall,
        outputs: files.iter().map(|p| p.display().to_string()).collect(),
        checks: &report.checks,
    };
    write(&manifest_path, serde_json::to_string_pretty(&manifest)?.as_bytes())?;
    Ok(RunOutcome {
        report,
        csv_path,
        manifest_path,
        files,
    })
}
