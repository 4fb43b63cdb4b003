use std::path::Path;

use marginbound::bounds::{BoundParams, Family};
use marginbound::distribution::SyntheticDistribution;
use marginbound::risk::UnboundedLoss;
use marginbound::{Error, Result};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::train::TrainerSpec;

pub const EXPERIMENT_SCHEMA: &str = "marginbound.experiment.v1";

/// Hypothesis class of a campaign. Only norm-capped linear predictors are
/// supported; in pool mode `pool_size` random directions are drawn.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassSpec {
    pub kind: ClassKind,
    pub pool_size: usize,
    pub norm_cap: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassKind {
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ValidationMode {
    /// Violation means some pool member exceeds its bound (the uniform event).
    Pool,
    /// One hypothesis trained per sample; a weaker event than `Pool`.
    Trained,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoverSearch {
    Exact,
    Greedy,
    /// Exact when the pool fits the exact search, greedy otherwise.
    Auto,
}

/// How the complexity inputs of the bounds are estimated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexitySettings {
    /// Fresh double samples averaged for expected covering numbers.
    pub cover_trials: usize,
    pub cover_search: CoverSearch,
    /// Fresh samples for the outer expectation of the peeling complexity.
    pub peeling_outer: usize,
    /// Sign vectors per Monte-Carlo Rademacher estimate (unused when exact).
    pub n_sigma: usize,
    pub alpha_grid: Vec<f64>,
    /// Draws for holdout risks and loss moments.
    pub holdout: usize,
}

impl Default for ComplexitySettings {
    fn default() -> Self {
        ComplexitySettings {
            cover_trials: 32,
            cover_search: CoverSearch::Auto,
            peeling_outer: 64,
            n_sigma: 256,
            alpha_grid: vec![1.25, 1.5, 1.75, 2.0],
            holdout: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnboundedSettings {
    pub loss: UnboundedLoss,
    pub rho_grid: Vec<f64>,
}

impl Default for UnboundedSettings {
    fn default() -> Self {
        UnboundedSettings {
            loss: UnboundedLoss::Hinge,
            rho_grid: vec![0.05, 0.1, 0.2, 0.4, 0.8],
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputPaths {
    pub json: Option<String>,
    pub csv: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "schema_name")]
    pub schema: String,
    pub distribution: SyntheticDistribution,
    pub class: ClassSpec,
    pub mode: ValidationMode,
    #[serde(default)]
    pub trainer: Option<TrainerSpec>,
    pub families: Vec<Family>,
    pub params: BoundParams,
    pub trials: usize,
    pub seed: u64,
    #[serde(default)]
    pub complexity: ComplexitySettings,
    #[serde(default)]
    pub unbounded: UnboundedSettings,
    #[serde(default)]
    pub output: OutputPaths,
}

fn schema_name() -> String {
    EXPERIMENT_SCHEMA.to_string()
}

impl ExperimentConfig {
    pub fn from_json(s: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(s).map_err(|e| Error::Input(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema != EXPERIMENT_SCHEMA {
            return Err(Error::Input(format!("unsupported config schema '{}'", self.schema)));
        }
        self.distribution.validate()?;
        self.params.validate()?;
        if self.trials == 0 {
            return Err(Error::Input("trials must be at least 1".into()));
        }
        if self.class.pool_size == 0 {
            return Err(Error::Input("class.pool_size must be at least 1".into()));
        }
        if !(self.class.norm_cap > 0.0 && self.class.norm_cap.is_finite()) {
            return Err(Error::Input("class.norm_cap must be positive".into()));
        }
        if self.families.is_empty() {
            return Err(Error::Input("no bound families requested".into()));
        }
        if self.params.m > usize::MAX as u64 {
            return Err(Error::Input("params.m is too large".into()));
        }
        let c = &self.complexity;
        if c.cover_trials == 0 || c.peeling_outer < 2 || c.n_sigma == 0 || c.holdout == 0 {
            return Err(Error::Input(
                "complexity needs cover_trials ≥ 1, peeling_outer ≥ 2, n_sigma ≥ 1, holdout ≥ 1".into(),
            ));
        }
        if self.families.contains(&Family::RadAllAlpha) && c.alpha_grid.is_empty() {
            return Err(Error::Input("rad-all-alpha needs a nonempty complexity.alpha_grid".into()));
        }
        if self.families.contains(&Family::UnboundedUniformRho) && self.unbounded.rho_grid.is_empty() {
            return Err(Error::Input("unbounded-uniform-rho needs a nonempty unbounded.rho_grid".into()));
        }
        match self.mode {
            ValidationMode::Pool => {}
            ValidationMode::Trained => {
                if self.trainer.is_none() {
                    return Err(Error::Input("trained mode needs a trainer".into()));
                }
                if let Some(f) = self.families.iter().find(|f| !supported_in_trained_mode(**f)) {
                    return Err(Error::Input(format!(
                        "family {f} needs a finite pool; trained mode supports cov-fat and rad-smooth"
                    )));
                }
                if let Some(t) = &self.trainer {
                    if !t.produces_linear() {
                        return Err(Error::Input("trained mode needs a linear trainer".into()));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Families whose complexity comes from a class-level formula rather than a
/// finite pool.
pub fn supported_in_trained_mode(f: Family) -> bool {
    matches!(f, Family::CovFat | Family::RadSmooth)
}

/// Apply `section.key=value` overrides to any serializable config.
///
/// Every path segment must name an existing field of the serialized config;
/// the value is parsed as JSON when possible and taken as a string otherwise.
pub fn apply_overrides<T>(cfg: &T, overrides: &[String]) -> Result<T>
where
    T: Serialize + DeserializeOwned,
{
    let mut root = serde_json::to_value(cfg)?;
    for o in overrides {
        let (path, raw) = o
            .split_once('=')
            .ok_or_else(|| Error::Input(format!("override '{o}' is not of the form section.key=value")))?;
        let segs: Vec<&str> = path.split('.').collect();
        if segs.iter().any(|s| s.is_empty()) {
            return Err(Error::Input(format!("override path '{path}' has an empty segment")));
        }
        let mut node = &mut root;
        for s in &segs {
            node = match node {
                Value::Object(map) => map
                    .get_mut(*s)
                    .ok_or_else(|| Error::Input(format!("unknown config key '{path}'")))?,
                Value::Array(items) => {
                    let i: usize = s
                        .parse()
                        .map_err(|_| Error::Input(format!("'{s}' in '{path}' is not an array index")))?;
                    let len = items.len();
                    items
                        .get_mut(i)
                        .ok_or_else(|| Error::Input(format!("index {i} out of range (len {len}) in '{path}'")))?
                }
                _ => return Err(Error::Input(format!("'{path}' descends into a scalar"))),
            };
        }
        *node = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    }
    serde_json::from_value(root).map_err(|e| Error::Input(format!("config after overrides: {e}")))
}
