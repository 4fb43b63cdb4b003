//! Real-valued predictors and their margins `y·h(x)`.
//!
//! Norm constraints are enforced by projection when a hypothesis is built
//! (and again when one is deserialized), so downstream formula code may
//! assume them.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sample::LabeledSample;
use crate::transform::TruncationSpec;

/// Schema tag written into serialized hypotheses.
pub const HYPOTHESIS_SCHEMA: &str = "marginbound.hypothesis.v1";

/// What a hypothesis is evaluated on.
#[derive(Debug, Clone, Copy)]
pub enum Query<'a> {
    Features(&'a [f64]),
    /// Position in a sample; only table hypotheses use it.
    Index(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Linear {
    w: Vec<f64>,
    norm_cap: f64,
}

impl Linear {
    /// Linear predictor `x ↦ w·x`, with `w` projected onto the ball of radius `norm_cap`.
    pub fn new(w: Vec<f64>, norm_cap: f64) -> Result<Self> {
        if !(norm_cap > 0.0 && norm_cap.is_finite()) {
            return Err(Error::input(format!("norm cap must be positive, got {norm_cap}")));
        }
        if w.is_empty() || w.iter().any(|v| !v.is_finite()) {
            return Err(Error::input("weight vector must be nonempty and finite"));
        }
        let mut w = w;
        project_l2_ball(&mut w, norm_cap);
        Ok(Linear { w, norm_cap })
    }

    pub fn unit(w: Vec<f64>) -> Result<Self> {
        Self::new(w, 1.0)
    }

    pub fn weights(&self) -> &[f64] {
        &self.w
    }

    pub fn norm_cap(&self) -> f64 {
        self.norm_cap
    }

    pub fn dim(&self) -> usize {
        self.w.len()
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        dot(&self.w, x)
    }
}

/// Axis-aligned threshold classifier with outputs in `{-1, +1}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stump {
    pub feature: usize,
    pub threshold: f64,
    /// `+1` predicts positive above the threshold, `-1` below.
    pub polarity: i8,
}

impl Stump {
    pub fn eval(&self, x: &[f64]) -> f64 {
        let s = f64::from(self.polarity.signum());
        if x[self.feature] > self.threshold {
            s
        } else {
            -s
        }
    }
}

/// Convex combination of stumps.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    weights: Vec<f64>,
    stumps: Vec<Stump>,
}

impl Ensemble {
    /// Weights are projected onto the probability simplex.
    pub fn new(weights: Vec<f64>, stumps: Vec<Stump>) -> Result<Self> {
        if weights.is_empty() || weights.len() != stumps.len() {
            return Err(Error::input(format!(
                "ensemble needs matching nonempty weights and stumps ({} vs {})",
                weights.len(),
                stumps.len()
            )));
        }
        if weights.iter().any(|v| !v.is_finite()) {
            return Err(Error::input("ensemble weights must be finite"));
        }
        if let Some(s) = stumps.iter().find(|s| s.polarity != 1 && s.polarity != -1) {
            return Err(Error::input(format!("stump polarity {} is not ±1", s.polarity)));
        }
        Ok(Ensemble {
            weights: project_simplex(&weights),
            stumps,
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn stumps(&self) -> &[Stump] {
        &self.stumps
    }

    fn min_dim(&self) -> usize {
        self.stumps.iter().map(|s| s.feature + 1).max().unwrap_or(0)
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.weights
            .iter()
            .zip(&self.stumps)
            .map(|(a, s)| a * s.eval(x))
            .sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Activation {
    Tanh,
    Relu,
    Identity,
}

impl Activation {
    pub fn apply(self, v: f64) -> f64 {
        match self {
            Activation::Tanh => v.tanh(),
            Activation::Relu => v.max(0.0),
            Activation::Identity => v,
        }
    }

    /// Derivative expressed through the activation's output value.
    pub fn derivative_from_output(self, out: f64) -> f64 {
        match self {
            Activation::Tanh => 1.0 - out * out,
            Activation::Relu => {
                if out > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Activation::Identity => 1.0,
        }
    }
}

/// Feed-forward network. Each layer is a row-major matrix whose rows have
/// `inputs + 1` entries, the last one multiplying a constant `1` input.
/// Hidden layers apply the activation; the single-row output layer does not.
#[derive(Debug, Clone, PartialEq)]
pub struct Ffnn {
    layers: Vec<Vec<Vec<f64>>>,
    activation: Activation,
    row_l1_cap: f64,
}

impl Ffnn {
    pub fn new(layers: Vec<Vec<Vec<f64>>>, activation: Activation, row_l1_cap: f64) -> Result<Self> {
        if !(row_l1_cap > 0.0 && row_l1_cap.is_finite()) {
            return Err(Error::input(format!("row l1 cap must be positive, got {row_l1_cap}")));
        }
        if layers.is_empty() {
            return Err(Error::input("network needs at least one layer"));
        }
        let mut width = None::<usize>;
        for (l, layer) in layers.iter().enumerate() {
            if layer.is_empty() {
                return Err(Error::input(format!("layer {l} has no units")));
            }
            let cols = layer[0].len();
            if cols < 2 || layer.iter().any(|r| r.len() != cols) {
                return Err(Error::input(format!("layer {l} rows must share a length ≥ 2")));
            }
            if let Some(w) = width {
                if cols != w + 1 {
                    return Err(Error::input(format!(
                        "layer {l} expects {} inputs but previous layer has {w} units",
                        cols - 1
                    )));
                }
            }
            width = Some(layer.len());
            if layer.iter().flatten().any(|v| !v.is_finite()) {
                return Err(Error::input(format!("layer {l} has non-finite weights")));
            }
        }
        if layers.last().map(Vec::len) != Some(1) {
            return Err(Error::input("output layer must have exactly one unit"));
        }
        let mut layers = layers;
        for row in layers.iter_mut().flatten() {
            project_l1_ball(row, row_l1_cap);
        }
        Ok(Ffnn {
            layers,
            activation,
            row_l1_cap,
        })
    }

    pub fn layers(&self) -> &[Vec<Vec<f64>>] {
        &self.layers
    }

    pub fn activation(&self) -> Activation {
        self.activation
    }

    pub fn row_l1_cap(&self) -> f64 {
        self.row_l1_cap
    }

    pub fn input_dim(&self) -> usize {
        self.layers[0][0].len() - 1
    }

    /// Outputs of every layer, input first; the last entry holds the scalar output.
    pub fn forward(&self, x: &[f64]) -> Vec<Vec<f64>> {
        let mut acts = vec![x.to_vec()];
        let last = self.layers.len() - 1;
        for (l, layer) in self.layers.iter().enumerate() {
            let input = acts.last().expect("nonempty");
            let out: Vec<f64> = layer
                .iter()
                .map(|row| {
                    let (w, b) = row.split_at(row.len() - 1);
                    let z = dot(w, input) + b[0];
                    if l == last {
                        z
                    } else {
                        self.activation.apply(z)
                    }
                })
                .collect();
            acts.push(out);
        }
        acts
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.forward(x).last().expect("nonempty")[0]
    }
}

/// Explicit finite table `index ↦ value`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    values: BTreeMap<usize, f64>,
}

impl Table {
    pub fn new(values: BTreeMap<usize, f64>) -> Result<Self> {
        if values.values().any(|v| !v.is_finite()) {
            return Err(Error::input("table values must be finite"));
        }
        Ok(Table { values })
    }

    pub fn from_values(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().copied().enumerate().collect())
    }

    pub fn values(&self) -> &BTreeMap<usize, f64> {
        &self.values
    }

    pub fn get(&self, i: usize) -> Result<f64> {
        self.values
            .get(&i)
            .copied()
            .ok_or_else(|| Error::input(format!("table hypothesis undefined at index {i}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "HypothesisRepr", into = "HypothesisRepr")]
pub enum Hypothesis {
    Linear(Linear),
    Ensemble(Ensemble),
    Ffnn(Ffnn),
    Table(Table),
    /// `β_ρ ∘ h`.
    Truncated(Box<Hypothesis>, TruncationSpec),
}

impl Hypothesis {
    pub fn evaluate(&self, q: Query<'_>) -> Result<f64> {
        match (self, q) {
            (Hypothesis::Table(t), Query::Index(i)) => t.get(i),
            (Hypothesis::Table(_), Query::Features(_)) => Err(Error::input(
                "table hypotheses are evaluated by sample index, not features",
            )),
            (Hypothesis::Truncated(inner, spec), q) => Ok(spec.apply(inner.evaluate(q)?)),
            (_, Query::Index(_)) => Err(Error::input(
                "feature-based hypotheses need feature vectors, not indices",
            )),
            (Hypothesis::Linear(l), Query::Features(x)) => {
                check_dim(x.len(), l.dim(), true)?;
                Ok(l.eval(x))
            }
            (Hypothesis::Ensemble(e), Query::Features(x)) => {
                check_dim(x.len(), e.min_dim(), false)?;
                Ok(e.eval(x))
            }
            (Hypothesis::Ffnn(n), Query::Features(x)) => {
                check_dim(x.len(), n.input_dim(), true)?;
                Ok(n.eval(x))
            }
        }
    }

    /// Evaluate on point `i` of a sample, by index for tables and by features otherwise.
    pub fn evaluate_at(&self, sample: &LabeledSample, i: usize) -> Result<f64> {
        if self.is_table() {
            self.evaluate(Query::Index(i))
        } else {
            self.evaluate(Query::Features(sample.point(i)))
        }
    }

    /// Margins `y_i h(x_i)` over a whole sample.
    pub fn margins(&self, sample: &LabeledSample) -> Result<Vec<f64>> {
        (0..sample.len())
            .map(|i| Ok(sample.label(i) * self.evaluate_at(sample, i)?))
            .collect()
    }

    fn is_table(&self) -> bool {
        match self {
            Hypothesis::Table(_) => true,
            Hypothesis::Truncated(inner, _) => inner.is_table(),
            _ => false,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let file = HypothesisFile {
            schema: HYPOTHESIS_SCHEMA.to_string(),
            hypothesis: self.clone(),
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let file: HypothesisFile = serde_json::from_str(s)?;
        if file.schema != HYPOTHESIS_SCHEMA {
            return Err(Error::input(format!(
                "unsupported hypothesis schema {:?}, expected {HYPOTHESIS_SCHEMA:?}",
                file.schema
            )));
        }
        Ok(file.hypothesis)
    }
}

impl From<Linear> for Hypothesis {
    fn from(l: Linear) -> Self {
        Hypothesis::Linear(l)
    }
}

impl From<Ensemble> for Hypothesis {
    fn from(e: Ensemble) -> Self {
        Hypothesis::Ensemble(e)
    }
}

impl From<Ffnn> for Hypothesis {
    fn from(n: Ffnn) -> Self {
        Hypothesis::Ffnn(n)
    }
}

impl From<Table> for Hypothesis {
    fn from(t: Table) -> Self {
        Hypothesis::Table(t)
    }
}

fn check_dim(got: usize, want: usize, exact: bool) -> Result<()> {
    if (exact && got != want) || got < want {
        return Err(Error::input(format!(
            "point has dimension {got}, hypothesis expects {want}"
        )));
    }
    Ok(())
}

/// `y·h(x)` for a single labeled point.
pub fn margin(h: &Hypothesis, q: Query<'_>, y: i8) -> Result<f64> {
    if y != 1 && y != -1 {
        return Err(Error::input(format!("label must be ±1, got {y}")));
    }
    Ok(f64::from(y) * h.evaluate(q)?)
}

/// `β_ρ ∘ h`. Binary and `ρ`-margin losses are unchanged by the truncation.
pub fn truncate(h: &Hypothesis, spec: TruncationSpec) -> Hypothesis {
    Hypothesis::Truncated(Box::new(h.clone()), spec)
}

#[derive(Serialize, Deserialize)]
struct HypothesisFile {
    schema: String,
    hypothesis: Hypothesis,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
enum HypothesisRepr {
    Linear {
        w: Vec<f64>,
        norm_cap: f64,
    },
    Ensemble {
        weights: Vec<f64>,
        stumps: Vec<Stump>,
    },
    Ffnn {
        layers: Vec<Vec<Vec<f64>>>,
        activation: Activation,
        row_l1_cap: f64,
    },
    Table {
        entries: Vec<(usize, f64)>,
    },
    Truncated {
        rho: f64,
        inner: Box<HypothesisRepr>,
    },
}

impl TryFrom<HypothesisRepr> for Hypothesis {
    type Error = Error;

    fn try_from(r: HypothesisRepr) -> Result<Self> {
        Ok(match r {
            HypothesisRepr::Linear { w, norm_cap } => Linear::new(w, norm_cap)?.into(),
            HypothesisRepr::Ensemble { weights, stumps } => Ensemble::new(weights, stumps)?.into(),
            HypothesisRepr::Ffnn {
                layers,
                activation,
                row_l1_cap,
            } => Ffnn::new(layers, activation, row_l1_cap)?.into(),
            HypothesisRepr::Table { entries } => {
                let n = entries.len();
                let values: BTreeMap<usize, f64> = entries.into_iter().collect();
                if values.len() != n {
                    return Err(Error::input("table lists an index twice"));
                }
                Table::new(values)?.into()
            }
            HypothesisRepr::Truncated { rho, inner } => {
                Hypothesis::Truncated(Box::new(Hypothesis::try_from(*inner)?), TruncationSpec::new(rho)?)
            }
        })
    }
}

impl From<Hypothesis> for HypothesisRepr {
    fn from(h: Hypothesis) -> Self {
        match h {
            Hypothesis::Linear(l) => HypothesisRepr::Linear {
                w: l.w,
                norm_cap: l.norm_cap,
            },
            Hypothesis::Ensemble(e) => HypothesisRepr::Ensemble {
                weights: e.weights,
                stumps: e.stumps,
            },
            Hypothesis::Ffnn(n) => HypothesisRepr::Ffnn {
                layers: n.layers,
                activation: n.activation,
                row_l1_cap: n.row_l1_cap,
            },
            Hypothesis::Table(t) => HypothesisRepr::Table {
                entries: t.values.into_iter().collect(),
            },
            Hypothesis::Truncated(inner, spec) => HypothesisRepr::Truncated {
                rho: spec.rho(),
                inner: Box::new((*inner).into()),
            },
        }
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn l2_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Radial projection onto `{‖w‖₂ ≤ cap}`.
pub fn project_l2_ball(w: &mut [f64], cap: f64) {
    let n = l2_norm(w);
    if n > cap {
        let s = cap / n;
        w.iter_mut().for_each(|v| *v *= s);
    }
}

/// Euclidean projection onto the probability simplex.
pub fn project_simplex(v: &[f64]) -> Vec<f64> {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (j, &uj) in u.iter().enumerate() {
        cumsum += uj;
        let t = (cumsum - 1.0) / (j as f64 + 1.0);
        if uj - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|&x| (x - theta).max(0.0)).collect()
}

/// Euclidean projection onto `{‖w‖₁ ≤ cap}`.
pub fn project_l1_ball(w: &mut [f64], cap: f64) {
    let l1: f64 = w.iter().map(|x| x.abs()).sum();
    if l1 <= cap {
        return;
    }
    let abs: Vec<f64> = w.iter().map(|x| x.abs() / cap).collect();
    let p = project_simplex(&abs);
    for (wi, pi) in w.iter_mut().zip(p) {
        *wi = wi.signum() * pi * cap;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample1(x: Vec<f64>, y: i8) -> LabeledSample {
        LabeledSample::new(vec![x], vec![y], 0, "t").unwrap()
    }

    #[test]
    fn margin_examples() {
        let h: Hypothesis = Linear::unit(vec![1.0, 0.0]).unwrap().into();
        assert_eq!(margin(&h, Query::Features(&[1.0, 0.0]), 1).unwrap(), 1.0);
        assert_eq!(margin(&h, Query::Features(&[1.0, 0.0]), -1).unwrap(), -1.0);
        let t: Hypothesis = Table::from_values(&[0.3]).unwrap().into();
        assert_eq!(margin(&t, Query::Index(0), 1).unwrap(), 0.3);
    }

    #[test]
    fn dimension_mismatch_is_input_error() {
        let h: Hypothesis = Linear::unit(vec![1.0, 0.0]).unwrap().into();
        assert!(matches!(
            margin(&h, Query::Features(&[1.0]), 1),
            Err(Error::Input(_))
        ));
        let t: Hypothesis = Table::from_values(&[0.3]).unwrap().into();
        assert!(t.evaluate(Query::Index(4)).is_err());
        assert!(t.evaluate(Query::Features(&[0.0])).is_err());
    }

    #[test]
    fn linear_is_projected() {
        let l = Linear::unit(vec![3.0, 4.0]).unwrap();
        assert!((l2_norm(l.weights()) - 1.0).abs() < 1e-12);
        assert!((l.weights()[0] - 0.6).abs() < 1e-12);
        let small = Linear::unit(vec![0.3, 0.4]).unwrap();
        assert_eq!(small.weights(), &[0.3, 0.4]);
    }

    #[test]
    fn ensemble_weights_on_simplex() {
        let s = Stump {
            feature: 0,
            threshold: 0.0,
            polarity: 1,
        };
        let e = Ensemble::new(vec![2.0, -1.0, 0.5], vec![s; 3]).unwrap();
        let sum: f64 = e.weights().iter().sum();
        assert!((sum - 1.0).abs() < 1e-12);
        assert!(e.weights().iter().all(|&w| w >= 0.0));
        let uniform = Ensemble::new(vec![0.0, 0.0], vec![s; 2]).unwrap();
        assert_eq!(uniform.weights(), &[0.5, 0.5]);
    }

    #[test]
    fn ffnn_rows_respect_l1_cap() {
        let layers = vec![
            vec![vec![3.0, -2.0, 1.0], vec![0.1, 0.1, 0.1]],
            vec![vec![5.0, 5.0, 0.0]],
        ];
        let n = Ffnn::new(layers, Activation::Tanh, 2.0).unwrap();
        for row in n.layers().iter().flatten() {
            assert!(row.iter().map(|v| v.abs()).sum::<f64>() <= 2.0 + 1e-12);
        }
        let h: Hypothesis = n.into();
        assert!(h.evaluate(Query::Features(&[0.5, 0.5])).unwrap().is_finite());
        assert!(Ffnn::new(vec![vec![vec![1.0, 0.0], vec![1.0, 0.0]]], Activation::Tanh, 1.0).is_err());
    }

    #[test]
    fn truncation_preserves_binary_and_margin_losses() {
        let rho = 0.25;
        let spec = TruncationSpec::new(rho).unwrap();
        let h: Hypothesis = Table::from_values(&[-2.0, -0.25, -0.1, 0.0, 0.1, 0.25, 0.3, 7.0]).unwrap().into();
        let ht = truncate(&h, spec);
        for y in [-1, 1] {
            let s = LabeledSample::indexed(vec![y; 8], 0, "t").unwrap();
            let a = h.margins(&s).unwrap();
            let b = ht.margins(&s).unwrap();
            for (u, v) in a.iter().zip(&b) {
                assert_eq!(*u <= 0.0, *v <= 0.0);
                assert_eq!(*u < rho, *v < rho);
                assert!(v.abs() <= rho);
            }
        }
        let lin: Hypothesis = Linear::unit(vec![1.0]).unwrap().into();
        let lt = truncate(&lin, TruncationSpec::new(1.0).unwrap());
        assert_eq!(lt.evaluate_at(&sample1(vec![0.5], 1), 0).unwrap(), 0.5);
    }

    #[test]
    fn hypothesis_json_round_trip() {
        let hs: Vec<Hypothesis> = vec![
            Linear::unit(vec![0.6, -0.8]).unwrap().into(),
            Table::from_values(&[0.3, -1.0]).unwrap().into(),
            truncate(
                &Linear::unit(vec![1.0]).unwrap().into(),
                TruncationSpec::new(0.5).unwrap(),
            ),
        ];
        for h in hs {
            let text = h.to_json().unwrap();
            assert!(text.contains(HYPOTHESIS_SCHEMA));
            assert_eq!(Hypothesis::from_json(&text).unwrap(), h);
        }
        let raw = r#"{"schema":"marginbound.hypothesis.v1","hypothesis":{"kind":"linear","w":[3.0,4.0],"norm_cap":1.0}}"#;
        let h = Hypothesis::from_json(raw).unwrap();
        match h {
            Hypothesis::Linear(l) => assert!((l2_norm(l.weights()) - 1.0).abs() < 1e-12),
            _ => panic!("wrong kind"),
        }
    }
}
