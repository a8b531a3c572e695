//! Experiment configuration, replica orchestration and result files.

mod experiments;
pub mod gates;

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::rng::StreamFactory;
use crate::walk::Kernel;

pub use experiments::*;

pub const LIBRARY_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExperimentId {
    E1,
    E2,
    E3,
    E4,
    E5,
    E6,
}

impl ExperimentId {
    pub const ALL: [ExperimentId; 6] = [
        ExperimentId::E1,
        ExperimentId::E2,
        ExperimentId::E3,
        ExperimentId::E4,
        ExperimentId::E5,
        ExperimentId::E6,
    ];

    fn tag(self) -> u64 {
        self as u64 + 1
    }
}

impl fmt::Display for ExperimentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "E{}", self.tag())
    }
}

impl FromStr for ExperimentId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        ExperimentId::ALL
            .into_iter()
            .find(|id| id.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown experiment '{s}' (expected E1..E6)"))
    }
}

/// Experiment-specific parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "experiment")]
pub enum ExperimentParams {
    /// `N_n / log n` against `Exp(1/π)` across a ladder of `n`.
    E1 { n: Vec<u64> },
    /// Increments over `(s, t]` and the first return after `n^s`.
    E2 { n: Vec<u64>, s: f64, t: f64 },
    /// Hitting time of the origin from `(r, 0)`, censored at `cap`.
    E3 { radius: Vec<u64>, cap: u64 },
    /// Longest excursion and last return before `n`.
    E4 { n: Vec<u64> },
    /// Local time and radius at time `⌊n^s⌋`.
    E5 { n: Vec<u64>, s: f64, epsilon: f64 },
    /// Tightness probes, staircase dichotomy, sampled-path pairing.
    E6 {
        n: Vec<u64>,
        delta: Vec<f64>,
        eta: f64,
        staircase: Vec<usize>,
        resolution: f64,
        mesh: f64,
        grid: Vec<f64>,
        pairings: u64,
    },
}

impl ExperimentParams {
    pub fn id(&self) -> ExperimentId {
        match self {
            ExperimentParams::E1 { .. } => ExperimentId::E1,
            ExperimentParams::E2 { .. } => ExperimentId::E2,
            ExperimentParams::E3 { .. } => ExperimentId::E3,
            ExperimentParams::E4 { .. } => ExperimentId::E4,
            ExperimentParams::E5 { .. } => ExperimentId::E5,
            ExperimentParams::E6 { .. } => ExperimentId::E6,
        }
    }

    /// Desk-scale defaults.
    pub fn defaults(id: ExperimentId) -> Self {
        match id {
            ExperimentId::E1 => ExperimentParams::E1 {
                n: vec![1_000, 100_000, 10_000_000],
            },
            ExperimentId::E2 => ExperimentParams::E2 {
                n: vec![10_000, 1_000_000, 100_000_000],
                s: 0.5,
                t: 1.0,
            },
            ExperimentId::E3 => ExperimentParams::E3 {
                radius: vec![10, 100, 1_000],
                cap: 100_000_000,
            },
            ExperimentId::E4 => ExperimentParams::E4 {
                n: vec![10_000, 1_000_000, 100_000_000],
            },
            ExperimentId::E5 => ExperimentParams::E5 {
                n: vec![10_000, 1_000_000, 100_000_000],
                s: 0.5,
                epsilon: 0.1,
            },
            ExperimentId::E6 => ExperimentParams::E6 {
                n: vec![1_000_000],
                delta: vec![0.1, 0.01, 0.001],
                eta: 0.2,
                staircase: vec![10, 100],
                resolution: 1e-3,
                mesh: 1e-5,
                grid: (1..=100).map(|i| i as f64 / 100.0).collect(),
                pairings: 200,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub replicas: u64,
    pub master_seed: u64,
    #[serde(default)]
    pub kernel: Kernel,
    #[serde(flatten)]
    pub params: ExperimentParams,
}

fn check_ladder(name: &str, values: &[u64], min: u64) -> Result<()> {
    if values.is_empty() {
        return invalid(format!("{name} list is empty"));
    }
    if let Some(v) = values.iter().find(|&&v| v < min) {
        return invalid(format!("{name} = {v} is below the minimum {min}"));
    }
    Ok(())
}

fn check_unit(name: &str, v: f64, open_low: bool) -> Result<()> {
    let ok = if open_low {
        v > 0.0 && v <= 1.0
    } else {
        (0.0..=1.0).contains(&v)
    };
    if !ok {
        return invalid(format!("{name} = {v} is outside its range"));
    }
    Ok(())
}

impl ExperimentConfig {
    pub fn new(id: ExperimentId, replicas: u64, master_seed: u64) -> Self {
        Self {
            replicas,
            master_seed,
            kernel: Kernel::Skip,
            params: ExperimentParams::defaults(id),
        }
    }

    pub fn id(&self) -> ExperimentId {
        self.params.id()
    }

    pub fn validate(&self) -> Result<()> {
        if self.replicas == 0 {
            return invalid("replicas must be positive");
        }
        match &self.params {
            ExperimentParams::E1 { n } | ExperimentParams::E4 { n } => check_ladder("n", n, 2),
            ExperimentParams::E2 { n, s, t } => {
                check_ladder("n", n, 2)?;
                check_unit("s", *s, true)?;
                check_unit("t", *t, true)?;
                if s > t {
                    return invalid(format!("need s ≤ t, got s = {s}, t = {t}"));
                }
                Ok(())
            }
            ExperimentParams::E3 { radius, cap } => {
                check_ladder("radius", radius, 2)?;
                if let Some(r) = radius.iter().find(|&&r| r > *cap) {
                    return invalid(format!("cap {cap} is below radius {r}"));
                }
                Ok(())
            }
            ExperimentParams::E5 { n, s, epsilon } => {
                check_ladder("n", n, 2)?;
                if *s <= 0.0 {
                    return invalid("s = 0 is degenerate (the radius statistic is constant)");
                }
                check_unit("s", *s, true)?;
                if !(*epsilon > 0.0 && *epsilon < 1.0) {
                    return invalid(format!("epsilon = {epsilon} is outside (0, 1)"));
                }
                Ok(())
            }
            ExperimentParams::E6 {
                n,
                delta,
                eta,
                staircase,
                resolution,
                mesh,
                grid,
                ..
            } => {
                check_ladder("n", n, 2)?;
                for d in delta {
                    check_unit("delta", *d, false)?;
                }
                if *eta <= 0.0 {
                    return invalid("eta must be positive");
                }
                if staircase.contains(&0) {
                    return invalid("staircase step counts must be positive");
                }
                if !(*resolution > 0.0 && *mesh > 0.0) {
                    return invalid("resolution and mesh must be positive");
                }
                crate::limit::validate_grid(grid)
            }
        }
    }

    /// Streams for ladder rung `rung` of this experiment.
    pub(crate) fn streams(&self, rung: usize) -> StreamFactory {
        StreamFactory::new(self.master_seed).for_purpose((self.id().tag() << 32) | rung as u64)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentSummary {
    pub library_version: &'static str,
    pub config: ExperimentConfig,
    pub results: ExperimentResults,
    pub checks: Vec<Check>,
}

impl ExperimentSummary {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// One row of `samples.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleRow {
    pub replica: u64,
    pub statistic: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRun {
    pub summary: ExperimentSummary,
    pub samples: Vec<SampleRow>,
}

pub fn samples_csv(rows: &[SampleRow]) -> String {
    let mut out = String::from("replica,statistic,value\n");
    for r in rows {
        out.push_str(&format!("{},{},{}\n", r.replica, r.statistic, r.value));
    }
    out
}

/// Histogram plot script for `samples.csv`.
pub const PLOT_SCRIPT: &str = r#"#!/usr/bin/env python3
"""Plot every statistic in samples.csv as a histogram and ECDF."""
import sys
import pandas as pd
import matplotlib.pyplot as plt
import numpy as np

path = sys.argv[1] if len(sys.argv) > 1 else "samples.csv"
df = pd.read_csv(path)
for name, group in df.groupby("statistic"):
    values = np.sort(group["value"].to_numpy())
    values = values[np.isfinite(values)]
    if values.size == 0:
        continue
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))
    ax1.hist(values, bins=60, density=True)
    ax1.set_title(name)
    ax2.step(values, np.arange(1, values.size + 1) / values.size, where="post")
    ax2.set_title("ECDF")
    safe = "".join(c if c.isalnum() else "_" for c in name)
    fig.savefig(f"{safe}.png", dpi=120)
    plt.close(fig)
"#;

/// Writes `summary.json`, `samples.csv` and `plot.py` under `dir`.
pub fn write_run(dir: &Path, run: &ExperimentRun) -> Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("summary.json"), run.summary.to_json()?)?;
    fs::write(dir.join("samples.csv"), samples_csv(&run.samples))?;
    fs::write(dir.join("plot.py"), PLOT_SCRIPT)?;
    Ok(())
}

/// Validates and runs an experiment.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentRun> {
    config.validate()?;
    match config.id() {
        ExperimentId::E1 => run_e1_marginal(config),
        ExperimentId::E2 => run_e2_increments(config),
        ExperimentId::E3 => run_e3_hitting(config),
        ExperimentId::E4 => run_e4_excursions(config),
        ExperimentId::E5 => run_e5_radius(config),
        ExperimentId::E6 => run_e6_topology(config),
    }
}

/// True when every value is strictly below its predecessor.
pub fn strictly_decreasing(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[1] < w[0])
}

/// True when no value exceeds its predecessor.
pub fn non_increasing(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[1] <= w[0])
}
