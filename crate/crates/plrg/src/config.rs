//! Experiment configuration and its JSON form.

use crate::error::HarnessError;
use serde::{Deserialize, Serialize};
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Experiment {
    Motifs,
    EdgesVertices,
    Supercritical,
    Graphex,
    Height,
    Graphon,
    Bernoulli,
    Regimes,
}

impl Experiment {
    pub const ALL: [Experiment; 8] = [
        Experiment::Motifs,
        Experiment::EdgesVertices,
        Experiment::Supercritical,
        Experiment::Graphex,
        Experiment::Height,
        Experiment::Graphon,
        Experiment::Bernoulli,
        Experiment::Regimes,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Motifs => "motifs",
            Experiment::EdgesVertices => "edges_vertices",
            Experiment::Supercritical => "supercritical",
            Experiment::Graphex => "graphex",
            Experiment::Height => "height",
            Experiment::Graphon => "graphon",
            Experiment::Bernoulli => "bernoulli",
            Experiment::Regimes => "regimes",
        }
    }
}

/// A number or a list of numbers in JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

fn one_or_many<'de, D, T>(d: D) -> Result<Vec<T>, D::Error>
where
    D: serde::Deserializer<'de>,
    T: Deserialize<'de>,
{
    Ok(match OneOrMany::deserialize(d)? {
        OneOrMany::One(v) => vec![v],
        OneOrMany::Many(v) => v,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    #[serde(deserialize_with = "one_or_many")]
    pub alpha: Vec<f64>,
    #[serde(deserialize_with = "one_or_many", default)]
    pub gamma: Vec<f64>,
    #[serde(deserialize_with = "one_or_many")]
    pub n_list: Vec<u64>,
    pub reps: u64,
    pub seed: u64,
    #[serde(default)]
    pub x_grid: Vec<f64>,
    pub output_dir: PathBuf,
    /// Graphex and critical-regime threshold factor.
    #[serde(default = "default_x0")]
    pub x0: f64,
    /// Graphon resolution.
    #[serde(default = "default_resolution")]
    pub resolution: usize,
    /// Clique-stretch window.
    #[serde(default = "default_window")]
    pub window: f64,
}

fn default_x0() -> f64 {
    4.0
}

fn default_resolution() -> usize {
    60
}

fn default_window() -> f64 {
    3.0
}

impl ExperimentConfig {
    /// Desk-scale defaults for each experiment.
    pub fn defaults(experiment: Experiment) -> Self {
        let (alpha, gamma, n_list, reps, x_grid): (Vec<f64>, Vec<f64>, Vec<u64>, u64, Vec<f64>) = match experiment {
            Experiment::Motifs => (vec![1.5], vec![1.5], vec![10_000], 1_000_000, vec![]),
            Experiment::EdgesVertices => (vec![2.0], vec![1.2], (10..=15).map(|k| 1 << k).collect(), 1000, vec![]),
            Experiment::Supercritical => (vec![2.0], vec![2.5], vec![10_000], 100_000, vec![]),
            Experiment::Graphex => (vec![2.0], vec![], vec![100_000], 100_000, vec![]),
            Experiment::Height => (vec![2.0], vec![1.0], vec![100_000], 10_000, vec![0.25, 0.5, 0.75]),
            Experiment::Graphon => (vec![1.5], vec![0.5, 0.8, 1.1, 1.5], vec![10_000], 100, vec![]),
            Experiment::Bernoulli => (vec![2.0], vec![3.0], vec![10_000], 100_000, vec![]),
            Experiment::Regimes => (vec![2.0], vec![1.5, 2.0, 3.0], vec![10_000], 1, vec![]),
        };
        Self {
            experiment,
            alpha,
            gamma,
            n_list,
            reps,
            seed: 0,
            x_grid,
            output_dir: PathBuf::from("out"),
            x0: default_x0(),
            resolution: default_resolution(),
            window: default_window(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        let c: Self = serde_json::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |m: &str| Err(HarnessError::Config(m.to_string()));
        if self.reps == 0 {
            return bad("reps must be at least 1");
        }
        if self.n_list.is_empty() {
            return bad("n_list must not be empty");
        }
        if self.alpha.is_empty() || self.alpha.iter().any(|&a| !(a > 0.0 && a.is_finite())) {
            return bad("alpha values must be positive");
        }
        if self.gamma.iter().any(|&g| !(g > 0.0 && g.is_finite())) {
            return bad("gamma values must be positive");
        }
        if self.experiment != Experiment::Graphex && self.gamma.is_empty() {
            return bad("gamma must not be empty");
        }
        if self.x_grid.iter().any(|&x| !(x > 0.0 && x < 1.0)) {
            return bad("grid points must lie in (0, 1)");
        }
        if self.x_grid.windows(2).any(|w| !(w[0] < w[1])) {
            return bad("grid must be strictly increasing");
        }
        if self.experiment == Experiment::Height && self.x_grid.is_empty() {
            return bad("height needs a grid");
        }
        if !(self.x0 > 1.0 && self.x0.is_finite()) {
            return bad("x0 must exceed 1");
        }
        if self.resolution == 0 || !(self.window > 0.0 && self.window.is_finite()) {
            return bad("resolution and window must be positive");
        }
        Ok(())
    }
}
