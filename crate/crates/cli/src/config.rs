//! Experiment configuration: flat JSON files, named presets, and flag
//! overrides.

use std::path::Path;
use std::str::FromStr;

use markov_risk::{Divergence, Estimator, RiskMode};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// A scalar-or-list JSON field, so `"k": 6` and `"k": [4, 8]` both parse.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Grid {
    One(u64),
    Many(Vec<u64>),
}

impl Grid {
    pub fn values(&self) -> Vec<u64> {
        match self {
            Grid::One(v) => vec![*v],
            Grid::Many(vs) => vs.clone(),
        }
    }
}

fn default_trials() -> u64 {
    100
}

fn default_risk_mode() -> String {
    "estimation_max".to_string()
}

/// The on-disk experiment description. Field names double as CLI override
/// flags (with dashes).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    pub k: Grid,
    pub n: Grid,
    pub delta: f64,
    pub divergences: Vec<String>,
    pub estimators: Vec<String>,
    #[serde(default = "default_trials")]
    pub trials: u64,
    pub master_seed: u64,
    #[serde(default)]
    pub burn_in: bool,
    #[serde(default = "default_risk_mode")]
    pub risk_mode: String,
    /// Replace the factor 2 in the prediction upper bound by 1/2 in reported
    /// theory values (the plotting convention).
    #[serde(default)]
    pub adjust_prediction: bool,
}

/// A validated configuration with every token parsed.
#[derive(Debug, Clone)]
pub struct ResolvedConfig {
    pub name: String,
    pub k_grid: Vec<usize>,
    pub n_grid: Vec<usize>,
    pub delta: f64,
    pub divergences: Vec<Divergence>,
    pub estimators: Vec<Estimator>,
    pub trials: u64,
    pub master_seed: u64,
    pub burn_in: bool,
    pub risk_mode: RiskMode,
    pub adjust_prediction: bool,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::config(format!("{}: {e}", path.display())))
    }

    pub fn resolve(&self) -> Result<ResolvedConfig, CliError> {
        let field = |name: &str, msg: String| CliError::config(format!("field `{name}`: {msg}"));

        let k_grid: Vec<usize> = self.k.values().iter().map(|&v| v as usize).collect();
        if k_grid.is_empty() {
            return Err(field("k", "grid is empty".into()));
        }
        if let Some(bad) = k_grid.iter().find(|&&k| k < 2) {
            return Err(field("k", format!("alphabet size {bad} below 2")));
        }
        let n_grid: Vec<usize> = self.n.values().iter().map(|&v| v as usize).collect();
        if n_grid.is_empty() {
            return Err(field("n", "grid is empty".into()));
        }
        if let Some(bad) = n_grid.iter().find(|&&n| n < 2) {
            return Err(field("n", format!("sample length {bad} below 2")));
        }

        let max_k = *k_grid.iter().max().expect("nonempty");
        if !(0.0 <= self.delta && self.delta < 1.0 / max_k as f64) {
            return Err(field(
                "delta",
                format!("{} outside [0, 1/{max_k})", self.delta),
            ));
        }

        if self.divergences.is_empty() {
            return Err(field("divergences", "list is empty".into()));
        }
        let divergences = self
            .divergences
            .iter()
            .map(|s| Divergence::from_str(s).map_err(|e| field("divergences", e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;

        if self.estimators.is_empty() {
            return Err(field("estimators", "list is empty".into()));
        }
        let estimators = self
            .estimators
            .iter()
            .map(|s| Estimator::from_str(s).map_err(|e| field("estimators", e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;

        if self.trials < 1 {
            return Err(field("trials", "need at least 1 trial".into()));
        }

        let risk_mode = RiskMode::from_str(&self.risk_mode)
            .map_err(|e| field("risk_mode", e.to_string()))?;

        Ok(ResolvedConfig {
            name: self.name.clone(),
            k_grid,
            n_grid,
            delta: self.delta,
            divergences,
            estimators,
            trials: self.trials,
            master_seed: self.master_seed,
            burn_in: self.burn_in,
            risk_mode,
            adjust_prediction: self.adjust_prediction,
        })
    }
}

/// Seven-point geometric grid from 1e4 to 1e5.
fn decade_grid() -> Grid {
    Grid::Many(vec![10_000, 14_678, 21_544, 31_623, 46_416, 68_129, 100_000])
}

/// Named experiment presets mirroring the four figure setups: KL prediction
/// and estimation over n (fig1a), L2 estimator comparison (fig1b), other
/// f-divergences (fig1c), and the k sweep at fixed n (fig1d).
pub fn preset(name: &str) -> Option<ExperimentConfig> {
    let base = ExperimentConfig {
        name: name.to_string(),
        k: Grid::One(6),
        n: decade_grid(),
        delta: 0.05,
        divergences: vec!["kl".into()],
        estimators: vec!["hybrid".into(), "add(0.5)".into()],
        trials: 100,
        master_seed: 1,
        burn_in: true,
        risk_mode: "estimation_max".into(),
        adjust_prediction: true,
    };
    match name {
        "fig1a" => Some(base),
        "fig1b" => Some(ExperimentConfig {
            divergences: vec!["l2".into()],
            estimators: vec!["add-sqrt".into(), "add(1)".into()],
            ..base
        }),
        "fig1c" => Some(ExperimentConfig {
            divergences: vec!["hellinger".into(), "chi2".into(), "alpha(0.33)".into()],
            estimators: vec!["add(0.5)".into()],
            ..base
        }),
        "fig1d" => Some(ExperimentConfig {
            k: Grid::Many(vec![4, 8, 12, 16, 20, 24, 28, 32, 36]),
            n: Grid::One(100_000),
            delta: 0.01,
            ..base
        }),
        _ => None,
    }
}

pub fn preset_names() -> &'static [&'static str] {
    &["fig1a", "fig1b", "fig1c", "fig1d"]
}
