use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ExactEnumeration,
    MonteCarlo,
    GreedyUpper,
    Formula,
}

/// Per-bucket term of a peeling-based estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BucketTerm {
    pub k: usize,
    pub value: f64,
}

/// A complexity value with the metadata needed to audit how it was obtained.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexityEstimate {
    pub value: f64,
    pub method: Method,
    /// Outer draws (fresh samples) for distribution-level estimates.
    pub outer_trials: Option<usize>,
    /// Sign vectors per Rademacher estimate.
    pub inner_trials: Option<usize>,
    pub seed: Option<u64>,
    pub stderr: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub buckets: Vec<BucketTerm>,
}

impl ComplexityEstimate {
    pub fn exact(value: f64) -> Self {
        ComplexityEstimate {
            value,
            method: Method::ExactEnumeration,
            outer_trials: None,
            inner_trials: None,
            seed: None,
            stderr: None,
            buckets: Vec::new(),
        }
    }

    pub fn greedy(value: f64) -> Self {
        ComplexityEstimate {
            method: Method::GreedyUpper,
            ..Self::exact(value)
        }
    }

    pub fn formula(value: f64) -> Self {
        ComplexityEstimate {
            method: Method::Formula,
            ..Self::exact(value)
        }
    }

    pub fn monte_carlo(value: f64, stderr: f64, inner_trials: usize, seed: u64) -> Self {
        ComplexityEstimate {
            value,
            method: Method::MonteCarlo,
            outer_trials: None,
            inner_trials: Some(inner_trials),
            seed: Some(seed),
            stderr: Some(stderr),
            buckets: Vec::new(),
        }
    }
}
