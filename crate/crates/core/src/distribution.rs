//! Synthetic data distributions with known (or estimable) risks.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::error::{Error, Result};
use crate::hypothesis::{dot, l2_norm, Hypothesis};
use crate::rng::substream;
use crate::sample::LabeledSample;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SyntheticDistribution {
    /// `y = ±1` equiprobable, `x = y·mean + sigma·N(0, I)` radially clipped to `radius`,
    /// then the label is flipped with probability `noise_rate`.
    TwoGaussianMixture {
        mean: Vec<f64>,
        sigma: f64,
        noise_rate: f64,
        radius: f64,
    },
    /// Points in the radius-`radius` ball at distance at least `gap` from the
    /// hyperplane `w_star·x = 0`, labeled by `sign(w_star·x)` and flipped with
    /// probability `noise_rate`.
    MarginSeparable {
        w_star: Vec<f64>,
        gap: f64,
        radius: f64,
        noise_rate: f64,
    },
}

/// Risk value with optional Monte-Carlo metadata.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiskEstimate {
    pub value: f64,
    pub stderr: Option<f64>,
    pub draws: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum RiskMode {
    Analytic,
    Holdout { n: usize, seed: u64 },
}

const HOLDOUT_BATCH: usize = 1 << 14;

impl SyntheticDistribution {
    pub fn validate(&self) -> Result<()> {
        match self {
            SyntheticDistribution::TwoGaussianMixture {
                mean,
                sigma,
                noise_rate,
                radius,
            } => {
                if mean.is_empty() || mean.iter().any(|v| !v.is_finite()) {
                    return Err(Error::input("mixture mean must be nonempty and finite"));
                }
                check_positive("sigma", *sigma)?;
                check_positive("radius", *radius)?;
                check_rate(*noise_rate)
            }
            SyntheticDistribution::MarginSeparable {
                w_star,
                gap,
                radius,
                noise_rate,
            } => {
                if w_star.is_empty() || l2_norm(w_star) == 0.0 || w_star.iter().any(|v| !v.is_finite()) {
                    return Err(Error::input("w_star must be a nonzero finite vector"));
                }
                check_positive("radius", *radius)?;
                if !(*gap >= 0.0 && gap < radius) {
                    return Err(Error::input(format!("gap must lie in [0, radius), got {gap}")));
                }
                check_rate(*noise_rate)
            }
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            SyntheticDistribution::TwoGaussianMixture { mean, .. } => mean.len(),
            SyntheticDistribution::MarginSeparable { w_star, .. } => w_star.len(),
        }
    }

    pub fn radius(&self) -> f64 {
        match self {
            SyntheticDistribution::TwoGaussianMixture { radius, .. }
            | SyntheticDistribution::MarginSeparable { radius, .. } => *radius,
        }
    }

    pub fn generator_id(&self) -> &'static str {
        match self {
            SyntheticDistribution::TwoGaussianMixture { .. } => "two-gaussian-mixture",
            SyntheticDistribution::MarginSeparable { .. } => "margin-separable-with-noise",
        }
    }

    /// Closed-form zero-one risk is available for linear hypotheses.
    pub fn analytic_risk_available(&self) -> bool {
        matches!(self, SyntheticDistribution::TwoGaussianMixture { .. })
    }

    /// One draw `(x, y)`.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> (Vec<f64>, i8) {
        match self {
            SyntheticDistribution::TwoGaussianMixture {
                mean,
                sigma,
                noise_rate,
                radius,
            } => {
                let y: i8 = if rng.random::<bool>() { 1 } else { -1 };
                let fy = f64::from(y);
                let mut x: Vec<f64> = mean
                    .iter()
                    .map(|mu| fy * mu + sigma * rng.sample::<f64, _>(StandardNormal))
                    .collect();
                clip_radius(&mut x, *radius);
                (x, flip(y, *noise_rate, rng))
            }
            SyntheticDistribution::MarginSeparable {
                w_star,
                gap,
                radius,
                noise_rate,
            } => {
                let n = w_star.len();
                let u: Vec<f64> = w_star.iter().map(|v| v / l2_norm(w_star)).collect();
                let y: i8 = if rng.random::<bool>() { 1 } else { -1 };
                let t = f64::from(y) * rng.random_range(*gap..=*radius);
                let mut x: Vec<f64> = u.iter().map(|ui| t * ui).collect();
                if n > 1 {
                    // direction orthogonal to u, length uniform over the (n-1)-ball slice
                    let mut v: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
                    let along = dot(&v, &u);
                    v.iter_mut().zip(&u).for_each(|(vi, ui)| *vi -= along * ui);
                    let vn = l2_norm(&v);
                    if vn > 0.0 {
                        let slice = (radius * radius - t * t).max(0.0).sqrt();
                        let len = slice * rng.random::<f64>().powf(1.0 / (n - 1) as f64);
                        x.iter_mut().zip(&v).for_each(|(xi, vi)| *xi += len * vi / vn);
                    }
                }
                clip_radius(&mut x, *radius);
                (x, flip(y, *noise_rate, rng))
            }
        }
    }

    /// `m` i.i.d. draws from the substream keyed by `seed`.
    pub fn sample(&self, m: usize, seed: u64) -> Result<LabeledSample> {
        self.validate()?;
        if m == 0 {
            return Err(Error::input("sample size must be at least 1"));
        }
        let mut rng = substream(seed, &[0x5A4D_504C]);
        let (points, labels) = (0..m).map(|_| self.draw(&mut rng)).unzip();
        LabeledSample::new(points, labels, seed, self.generator_id())
    }

    /// Zero-one risk `R(h) = P[y h(x) ≤ 0]`.
    pub fn true_risk(&self, h: &Hypothesis, mode: RiskMode) -> Result<RiskEstimate> {
        self.validate()?;
        match mode {
            RiskMode::Analytic => self.analytic_risk(h),
            RiskMode::Holdout { n, seed } => self.holdout_risk(h, n, seed),
        }
    }

    fn analytic_risk(&self, h: &Hypothesis) -> Result<RiskEstimate> {
        let SyntheticDistribution::TwoGaussianMixture {
            mean,
            sigma,
            noise_rate,
            ..
        } = self
        else {
            return Err(Error::capability(format!(
                "no closed-form risk for the {} distribution",
                self.generator_id()
            )));
        };
        let w = match linear_core(h) {
            Some(w) => w,
            None => {
                return Err(Error::capability(
                    "closed-form risk is only available for linear hypotheses",
                ))
            }
        };
        if w.len() != mean.len() {
            return Err(Error::input(format!(
                "hypothesis dimension {} does not match distribution dimension {}",
                w.len(),
                mean.len()
            )));
        }
        let wn = l2_norm(w);
        // Radial clipping preserves sign(w·x), so the unclipped Gaussian law decides errors.
        let clean = if wn == 0.0 {
            1.0
        } else {
            normal_cdf(-dot(w, mean) / (sigma * wn))
        };
        let value = if wn == 0.0 {
            1.0
        } else {
            (1.0 - noise_rate) * clean + noise_rate * (1.0 - clean)
        };
        Ok(RiskEstimate {
            value,
            stderr: None,
            draws: None,
        })
    }

    fn holdout_risk(&self, h: &Hypothesis, n: usize, seed: u64) -> Result<RiskEstimate> {
        if n == 0 {
            return Err(Error::input("holdout size must be at least 1"));
        }
        let batches = n.div_ceil(HOLDOUT_BATCH);
        let errors: Vec<Result<usize>> = (0..batches)
            .into_par_iter()
            .map(|b| {
                let mut rng = substream(seed, &[0x484F_4C44, b as u64]);
                let count = HOLDOUT_BATCH.min(n - b * HOLDOUT_BATCH);
                let mut errs = 0usize;
                for _ in 0..count {
                    let (x, y) = self.draw(&mut rng);
                    let u = f64::from(y) * h.evaluate(crate::hypothesis::Query::Features(&x))?;
                    if u <= 0.0 {
                        errs += 1;
                    }
                }
                Ok(errs)
            })
            .collect();
        let mut total = 0usize;
        for e in errors {
            total += e?;
        }
        let p = total as f64 / n as f64;
        Ok(RiskEstimate {
            value: p,
            stderr: Some((p * (1.0 - p) / n as f64).sqrt()),
            draws: Some(n),
        })
    }
}

fn linear_core(h: &Hypothesis) -> Option<&[f64]> {
    match h {
        Hypothesis::Linear(l) => Some(l.weights()),
        Hypothesis::Truncated(inner, _) => linear_core(inner),
        _ => None,
    }
}

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

fn clip_radius(x: &mut [f64], radius: f64) {
    crate::hypothesis::project_l2_ball(x, radius);
}

fn flip<R: Rng + ?Sized>(y: i8, rate: f64, rng: &mut R) -> i8 {
    if rate > 0.0 && rng.random::<f64>() < rate {
        -y
    } else {
        y
    }
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::input(format!("{name} must be positive, got {v}")))
    }
}

fn check_rate(r: f64) -> Result<()> {
    if (0.0..=0.5).contains(&r) {
        Ok(())
    } else {
        Err(Error::input(format!("noise rate must lie in [0, 0.5], got {r}")))
    }
}
