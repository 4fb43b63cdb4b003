use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Schema tag written into serialized samples.
pub const SAMPLE_SCHEMA: &str = "marginbound.sample.v1";

/// A finite labeled sample `((x_1, y_1), ..., (x_m, y_m))` with `y_i ∈ {-1, +1}`.
///
/// Construction validates the shape, so every `LabeledSample` in circulation
/// is nonempty, rectangular and carries only `±1` labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SampleRepr", into = "SampleRepr")]
pub struct LabeledSample {
    points: Vec<Vec<f64>>,
    labels: Vec<i8>,
    seed: u64,
    generator_id: String,
}

#[derive(Serialize, Deserialize)]
struct SampleRepr {
    schema: String,
    generator_id: String,
    seed: u64,
    points: Vec<Vec<f64>>,
    labels: Vec<i8>,
}

impl TryFrom<SampleRepr> for LabeledSample {
    type Error = Error;

    fn try_from(r: SampleRepr) -> Result<Self> {
        if r.schema != SAMPLE_SCHEMA {
            return Err(Error::input(format!(
                "unsupported sample schema {:?}, expected {SAMPLE_SCHEMA:?}",
                r.schema
            )));
        }
        LabeledSample::new(r.points, r.labels, r.seed, r.generator_id)
    }
}

impl From<LabeledSample> for SampleRepr {
    fn from(s: LabeledSample) -> Self {
        SampleRepr {
            schema: SAMPLE_SCHEMA.to_string(),
            generator_id: s.generator_id,
            seed: s.seed,
            points: s.points,
            labels: s.labels,
        }
    }
}

impl LabeledSample {
    pub fn new(
        points: Vec<Vec<f64>>,
        labels: Vec<i8>,
        seed: u64,
        generator_id: impl Into<String>,
    ) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::input("sample must contain at least one point"));
        }
        if points.len() != labels.len() {
            return Err(Error::input(format!(
                "{} points but {} labels",
                points.len(),
                labels.len()
            )));
        }
        let dim = points[0].len();
        if let Some(i) = points.iter().position(|p| p.len() != dim) {
            return Err(Error::input(format!(
                "point {i} has dimension {}, expected {dim}",
                points[i].len()
            )));
        }
        if points.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::Data("non-finite feature value".into()));
        }
        if let Some(i) = labels.iter().position(|&y| y != 1 && y != -1) {
            return Err(Error::input(format!("label {i} is {}, expected ±1", labels[i])));
        }
        Ok(LabeledSample {
            points,
            labels,
            seed,
            generator_id: generator_id.into(),
        })
    }

    /// Sample over index-addressed points (for table hypotheses); features are empty.
    pub fn indexed(labels: Vec<i8>, seed: u64, generator_id: impl Into<String>) -> Result<Self> {
        let points = vec![Vec::new(); labels.len()];
        Self::new(points, labels, seed, generator_id)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    /// Always false; kept for clippy's `len_without_is_empty`.
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn labels(&self) -> &[i8] {
        &self.labels
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i]
    }

    pub fn label(&self, i: usize) -> f64 {
        f64::from(self.labels[i])
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn generator_id(&self) -> &str {
        &self.generator_id
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}
