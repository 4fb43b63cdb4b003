//! Empirical margin losses, zero-one risk and loss moments.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypothesis::Hypothesis;
use crate::sample::LabeledSample;
use crate::transform::{zero_one, MarginTransform};

/// `(1/m) Σ φ(y_i h(x_i))`.
pub fn empirical_margin_loss(h: &Hypothesis, s: &LabeledSample, t: &MarginTransform) -> Result<f64> {
    Ok(mean_transform(&h.margins(s)?, |u| t.apply(u)))
}

/// `R̂_S(h) = (1/m) Σ 1{y_i h(x_i) ≤ 0}`.
pub fn empirical_risk(h: &Hypothesis, s: &LabeledSample) -> Result<f64> {
    Ok(mean_transform(&h.margins(s)?, zero_one))
}

pub(crate) fn mean_transform(margins: &[f64], f: impl Fn(f64) -> f64) -> f64 {
    margins.iter().map(|&u| f(u)).sum::<f64>() / margins.len() as f64
}

/// Nonnegative, possibly unbounded, losses of the margin `u = y h(x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UnboundedLoss {
    /// `max(0, 1 - u)`
    Hinge,
    /// `(1 - u)²`
    Squared,
    /// `log(1 + e^{-u})`
    Logistic,
    /// `e^{-u}`
    Exponential,
}

impl UnboundedLoss {
    pub fn apply(self, u: f64) -> f64 {
        match self {
            UnboundedLoss::Hinge => (1.0 - u).max(0.0),
            UnboundedLoss::Squared => (1.0 - u) * (1.0 - u),
            UnboundedLoss::Logistic => {
                // log1p(e^{-u}) without overflow for very negative u
                if u < -30.0 {
                    -u
                } else {
                    (-u).exp().ln_1p()
                }
            }
            UnboundedLoss::Exponential => (-u).exp(),
        }
    }
}

/// Per-point losses `L(h, z_i)`.
pub fn losses(h: &Hypothesis, loss: UnboundedLoss, s: &LabeledSample) -> Result<Vec<f64>> {
    Ok(h.margins(s)?.into_iter().map(|u| loss.apply(u)).collect())
}

/// `(1/m) Σ L_i^α`, the empirical `α`-moment of a list of loss values.
pub fn moment_of(values: &[f64], alpha: f64) -> Result<f64> {
    if !(alpha > 1.0 && alpha <= 2.0) {
        return Err(Error::input(format!("alpha must lie in (1, 2], got {alpha}")));
    }
    if values.is_empty() {
        return Err(Error::input("moment of an empty list"));
    }
    if let Some(v) = values.iter().find(|v| !v.is_finite() || **v < 0.0) {
        return Err(Error::Data(format!("loss value {v} is not a finite nonnegative number")));
    }
    Ok(values.iter().map(|v| v.powf(alpha)).sum::<f64>() / values.len() as f64)
}

/// Empirical `α`-moment of the loss of `h` over a sample.
pub fn loss_moment(h: &Hypothesis, loss: UnboundedLoss, s: &LabeledSample, alpha: f64) -> Result<f64> {
    moment_of(&losses(h, loss, s)?, alpha)
}

/// Write `index,margin,loss` rows for a hypothesis on a sample.
pub fn write_margins_csv<W: Write>(
    w: W,
    h: &Hypothesis,
    s: &LabeledSample,
    t: &MarginTransform,
) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["index", "margin", "loss"])?;
    for (i, u) in h.margins(s)?.into_iter().enumerate() {
        out.write_record([i.to_string(), u.to_string(), t.apply(u).to_string()])?;
    }
    out.flush()?;
    Ok(())
}
