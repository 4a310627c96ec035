//! JSON run configuration with defaults and field-level validation.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use sep_core::{ModelParams, Profile};

use crate::error::{HydroError, Result};

/// Environment variable that overrides `output_dir`.
pub const OUTPUT_DIR_ENV: &str = "SEP_OUTPUT_DIR";

const MODEL_KEYS: [&str; 7] = ["alpha", "n", "theta", "epsilon", "gamma", "beta", "delta"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelBlock {
    pub alpha: u32,
    pub n: usize,
    pub theta: f64,
    pub epsilon: f64,
    pub gamma: f64,
    pub beta: f64,
    pub delta: f64,
}

impl Default for ModelBlock {
    /// `α = 1`, `N = 100`, `θ = 0`, `(ε, γ, δ, β) = (0.8, 0.2, 0.2, 0.8)`.
    fn default() -> Self {
        Self { alpha: 1, n: 100, theta: 0.0, epsilon: 0.8, gamma: 0.2, beta: 0.8, delta: 0.2 }
    }
}

impl ModelBlock {
    pub fn params(&self) -> Result<ModelParams> {
        if self.alpha == 0 {
            return Err(HydroError::config("model.alpha", "must be at least 1"));
        }
        if self.n < 2 {
            return Err(HydroError::config("model.n", "must be at least 2"));
        }
        if !self.theta.is_finite() {
            return Err(HydroError::config("model.theta", "must be finite"));
        }
        for (name, v) in [("epsilon", self.epsilon), ("gamma", self.gamma), ("beta", self.beta), ("delta", self.delta)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(HydroError::config(format!("model.{name}"), "must be positive and finite"));
            }
        }
        ModelParams::new(self.alpha, self.n, self.theta, self.epsilon, self.gamma, self.beta, self.delta)
            .map_err(|e| HydroError::config("model", e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TimeBlock {
    pub horizon: f64,
    pub checkpoints: Vec<f64>,
}

impl Default for TimeBlock {
    fn default() -> Self {
        Self { horizon: 0.2, checkpoints: vec![0.05, 0.1, 0.2] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NumericBlock {
    /// Bins of the empirical profile.
    pub bins: usize,
    /// Cells of the PDE grid.
    pub grid: usize,
    /// PDE time step; the grid spacing when absent.
    pub dt: Option<f64>,
}

impl Default for NumericBlock {
    fn default() -> Self {
        Self { bins: 20, grid: sep_core::pde::DEFAULT_GRID, dt: None }
    }
}

impl NumericBlock {
    pub fn time_step(&self) -> f64 {
        self.dt.unwrap_or(1.0 / self.grid as f64)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EnsembleBlock {
    pub runs: usize,
    pub seed: u64,
}

impl Default for EnsembleBlock {
    fn default() -> Self {
        Self { runs: 50, seed: 20_240_501 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    L1,
    L2,
    Sup,
}

/// Settings of the multi-run experiments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PlanBlock {
    pub n_list: Vec<usize>,
    pub thetas: Vec<f64>,
    /// Window fractions for the averaging diagnostic.
    pub epsilons: Vec<f64>,
    pub metrics: Vec<Metric>,
    /// L¹ tolerance at the largest `N`; `0.03·α` when absent.
    pub l1_tolerance: Option<f64>,
    /// Test functions `G(u)` for the martingale suite.
    pub test_functions: Vec<Profile>,
}

impl Default for PlanBlock {
    fn default() -> Self {
        Self {
            n_list: vec![100, 200, 400],
            thetas: vec![0.0, 1.0, 2.0],
            epsilons: vec![0.2, 0.1, 0.05],
            metrics: vec![Metric::L1, Metric::L2, Metric::Sup],
            l1_tolerance: None,
            test_functions: vec![
                // sin²(πu), vanishing at both ends.
                Profile::Harmonic { offset: 0.5, slope: 0.0, cos_amp: -0.5, sin_amp: 0.0, freq: 2.0 * std::f64::consts::PI },
                Profile::linear(0.0, 1.0),
            ],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelBlock,
    #[serde(default = "default_initial")]
    pub initial: Profile,
    #[serde(default)]
    pub time: TimeBlock,
    #[serde(default)]
    pub numeric: NumericBlock,
    #[serde(default)]
    pub ensemble: EnsembleBlock,
    #[serde(default)]
    pub plan: PlanBlock,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
}

fn default_initial() -> Profile {
    Profile::constant(0.5)
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("sep-output")
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            model: ModelBlock::default(),
            initial: default_initial(),
            time: TimeBlock::default(),
            numeric: NumericBlock::default(),
            ensemble: EnsembleBlock::default(),
            plan: PlanBlock::default(),
            output_dir: default_output_dir(),
        }
    }
}

/// Moves model keys written at the top level into the `model` block.
fn normalize(mut value: Value) -> Result<Value> {
    let Value::Object(map) = &mut value else {
        return Err(HydroError::config("", "configuration must be a JSON object"));
    };
    let flat: Vec<String> = MODEL_KEYS.iter().filter(|k| map.contains_key(**k)).map(|k| k.to_string()).collect();
    if !flat.is_empty() {
        if map.contains_key("model") {
            return Err(HydroError::config(flat[0].clone(), "model keys belong inside the `model` block"));
        }
        let mut model = Map::new();
        for k in flat {
            let v = map.remove(&k).expect("key present");
            model.insert(k, v);
        }
        map.insert("model".into(), Value::Object(model));
    }
    Ok(value)
}

impl RunConfig {
    pub fn from_json_str(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text)
            .map_err(|e| HydroError::config("", format!("not valid JSON: {e}")))?;
        let value = normalize(value)?;
        let config: RunConfig = serde_path_to_error::deserialize(value).map_err(|e| {
            let field = e.path().to_string();
            HydroError::config(if field == "." { String::new() } else { field }, e.into_inner().to_string())
        })?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| HydroError::io(path, e))?;
        Self::from_json_str(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("configuration serializes")
    }

    pub fn params(&self) -> Result<ModelParams> {
        self.model.params()
    }

    /// The output directory after applying the environment override.
    pub fn resolved_output_dir(&self) -> PathBuf {
        std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from).unwrap_or_else(|| self.output_dir.clone())
    }

    pub fn validate(&self) -> Result<()> {
        let params = self.params()?;
        let alpha = params.alpha() as f64;
        self.initial
            .check_range(0.0, alpha)
            .map_err(|e| HydroError::config("initial", e.to_string()))?;
        if let Profile::Table { .. } = self.initial {
            Profile::table(match &self.initial {
                Profile::Table { points } => points.clone(),
                _ => unreachable!(),
            })
            .map_err(|e| HydroError::config("initial.points", e.to_string()))?;
        }
        let t = &self.time;
        if !(t.horizon > 0.0 && t.horizon.is_finite()) {
            return Err(HydroError::config("time.horizon", "must be positive"));
        }
        if t.checkpoints.is_empty() {
            return Err(HydroError::config("time.checkpoints", "needs at least one time"));
        }
        if t.checkpoints.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(HydroError::config("time.checkpoints", "must be strictly increasing"));
        }
        if t.checkpoints.iter().any(|&c| !(c >= 0.0 && c <= t.horizon)) {
            return Err(HydroError::config("time.checkpoints", "must lie in [0, horizon]"));
        }
        let nb = &self.numeric;
        if nb.bins == 0 || nb.bins > params.sites() {
            return Err(HydroError::config("numeric.bins", "must lie in 1..=N−1"));
        }
        if nb.grid < 2 {
            return Err(HydroError::config("numeric.grid", "must be at least 2"));
        }
        if let Some(dt) = nb.dt {
            if !(dt > 0.0 && dt.is_finite()) {
                return Err(HydroError::config("numeric.dt", "must be positive"));
            }
        }
        if self.ensemble.runs == 0 {
            return Err(HydroError::config("ensemble.runs", "must be at least 1"));
        }
        let p = &self.plan;
        if p.n_list.is_empty() || p.n_list.windows(2).any(|w| w[0] >= w[1]) {
            return Err(HydroError::config("plan.n_list", "must be non-empty and strictly increasing"));
        }
        if p.n_list.iter().any(|&n| n < 2 || n - 1 < nb.bins) {
            return Err(HydroError::config("plan.n_list", "every N must satisfy N−1 ≥ numeric.bins"));
        }
        if p.thetas.iter().any(|t| !t.is_finite()) {
            return Err(HydroError::config("plan.thetas", "must be finite"));
        }
        if p.epsilons.iter().any(|&e| !(e > 0.0 && e < 1.0)) {
            return Err(HydroError::config("plan.epsilons", "must lie in (0, 1)"));
        }
        if let Some(tol) = p.l1_tolerance {
            if !(tol > 0.0) {
                return Err(HydroError::config("plan.l1_tolerance", "must be positive"));
            }
        }
        Ok(())
    }
}
