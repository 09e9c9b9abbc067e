//! Experiment configuration: a single JSON document, schema-validated
//! before any computation. Unknown keys are rejected.

use serde::Deserialize;
use std::collections::BTreeMap;
use zeno_core::zeno::{BoundKind, NormKind};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub scenario: ScenarioConfig,
    pub t: TimeSpec,
    #[serde(default)]
    pub n_grid: NGridSpec,
    #[serde(default)]
    pub norm_kind: Option<NormKindSpec>,
    #[serde(default)]
    pub bound: BoundSpec,
    #[serde(default)]
    pub seed: u64,
    pub output: OutputSpec,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum TimeSpec {
    One(f64),
    Many(Vec<f64>),
}

impl TimeSpec {
    pub fn values(&self) -> Vec<f64> {
        match self {
            TimeSpec::One(t) => vec![*t],
            TimeSpec::Many(ts) => ts.clone(),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum NGridSpec {
    List(Vec<u64>),
    Geometric { start: u64, stop: u64, factor: u64 },
}

impl Default for NGridSpec {
    fn default() -> Self {
        NGridSpec::Geometric { start: 16, stop: 1024, factor: 2 }
    }
}

impl NGridSpec {
    pub fn values(&self) -> Result<Vec<u64>, String> {
        let grid = match self {
            NGridSpec::List(v) => v.clone(),
            NGridSpec::Geometric { start, stop, factor } => {
                if *factor < 2 {
                    return Err("n_grid factor must be >= 2".into());
                }
                let mut v = Vec::new();
                let mut n = *start;
                while n <= *stop {
                    v.push(n);
                    match n.checked_mul(*factor) {
                        Some(next) => n = next,
                        None => break,
                    }
                }
                v
            }
        };
        if grid.is_empty() {
            return Err("n_grid is empty".into());
        }
        if grid[0] < 1 {
            return Err("n_grid entries must be >= 1".into());
        }
        if grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err("n_grid must be strictly increasing".into());
        }
        Ok(grid)
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
pub enum NormKindSpec {
    #[serde(rename = "spectral-superop")]
    SpectralSuperop,
    #[serde(rename = "hermitian-1to1-sampled")]
    Hermitian1to1Sampled,
}

impl From<NormKindSpec> for NormKind {
    fn from(s: NormKindSpec) -> Self {
        match s {
            NormKindSpec::SpectralSuperop => NormKind::SpectralSuperop,
            NormKindSpec::Hermitian1to1Sampled => NormKind::Hermitian1to1Sampled,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
pub enum BoundSpec {
    #[default]
    #[serde(rename = "none")]
    None,
    #[serde(rename = "thm1")]
    Thm1,
    #[serde(rename = "uniform")]
    Uniform,
}

impl From<BoundSpec> for BoundKind {
    fn from(s: BoundSpec) -> Self {
        match s {
            BoundSpec::None => BoundKind::None,
            BoundSpec::Thm1 => BoundKind::Thm1,
            BoundSpec::Uniform => BoundKind::Uniform,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub path: String,
    #[serde(default)]
    pub format: OutputFormat,
}

#[derive(Debug, Clone, Copy, Default, Deserialize, PartialEq, Eq)]
pub enum OutputFormat {
    #[default]
    #[serde(rename = "csv")]
    Csv,
    #[serde(rename = "json")]
    Json,
}

impl ExperimentConfig {
    /// Parse and validate; every failure here is a configuration error
    /// (exit code 2 territory).
    pub fn load(path: &std::path::Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        let config: ExperimentConfig =
            serde_json::from_str(&text).map_err(|e| format!("invalid config: {e}"))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), String> {
        for t in self.t.values() {
            if !t.is_finite() || t < 0.0 {
                return Err(format!("t must be finite and >= 0, got {t}"));
            }
        }
        if self.t.values().is_empty() {
            return Err("t list is empty".into());
        }
        self.n_grid.values()?;
        if self.scenario.name.is_empty() {
            return Err("scenario name is empty".into());
        }
        if self.output.path.is_empty() {
            return Err("output path is empty".into());
        }
        Ok(())
    }
}
