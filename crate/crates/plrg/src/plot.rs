//! Whitespace-delimited data files for external plotting tools.

use crate::error::HarnessError;
use crate::report::Report;
use plrg_core::graphon::GraphonGrid;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum PlotKind {
    GraphonHeatmap,
    BoundaryCurve,
    CovMatrix,
}

impl FromStr for PlotKind {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "graphon_heatmap" => Ok(PlotKind::GraphonHeatmap),
            "boundary_curve" => Ok(PlotKind::BoundaryCurve),
            "cov_matrix" => Ok(PlotKind::CovMatrix),
            other => Err(HarnessError::Config(format!(
                "unknown plot kind {other:?} (expected graphon_heatmap, boundary_curve or cov_matrix)"
            ))),
        }
    }
}

/// Plot-ready data attached to a report.
#[derive(Debug, Clone, PartialEq)]
pub enum PlotData {
    /// A `k x k` grid.
    GraphonHeatmap { label: String, grid: GraphonGrid },
    /// `(x, h_hat(x))` points; the file adds the `1/x` reference.
    BoundaryCurve { label: String, points: Vec<(f64, f64)> },
    /// `(x, y, empirical, target)` quadruples.
    CovMatrix { label: String, entries: Vec<(f64, f64, f64, f64)> },
}

impl PlotData {
    fn kind(&self) -> PlotKind {
        match self {
            PlotData::GraphonHeatmap { .. } => PlotKind::GraphonHeatmap,
            PlotData::BoundaryCurve { .. } => PlotKind::BoundaryCurve,
            PlotData::CovMatrix { .. } => PlotKind::CovMatrix,
        }
    }

    fn label(&self) -> &str {
        match self {
            PlotData::GraphonHeatmap { label, .. }
            | PlotData::BoundaryCurve { label, .. }
            | PlotData::CovMatrix { label, .. } => label,
        }
    }

    fn render(&self) -> String {
        let mut s = String::new();
        match self {
            PlotData::GraphonHeatmap { grid, .. } => {
                for row in grid.values().chunks(grid.k()) {
                    let cells: Vec<String> = row.iter().map(f64::to_string).collect();
                    s.push_str(&cells.join(" "));
                    s.push('\n');
                }
            }
            PlotData::BoundaryCurve { points, .. } => {
                s.push_str("# x h_hat reference\n");
                for &(x, h) in points {
                    let _ = writeln!(s, "{x} {h} {}", 1.0 / x);
                }
            }
            PlotData::CovMatrix { entries, .. } => {
                s.push_str("# x y empirical target\n");
                for &(x, y, e, t) in entries {
                    let _ = writeln!(s, "{x} {y} {e} {t}");
                }
            }
        }
        s
    }
}

/// Writes every plot of `kind` in `report` to `dir` as `<label>.txt`.
pub fn emit_plot_data(report: &Report, kind: PlotKind, dir: &Path) -> Result<Vec<PathBuf>, HarnessError> {
    fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    let mut written = Vec::new();
    for p in report.plots.iter().filter(|p| p.kind() == kind) {
        let path = dir.join(format!("{}.txt", p.label()));
        fs::write(&path, p.render()).map_err(|e| HarnessError::io(&path, e))?;
        written.push(path);
    }
    Ok(written)
}
