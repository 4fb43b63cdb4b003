//! Peeling partition `𝒢_k` and the peeling-based complexity `𝔯_m(𝒢)`.
//!
//! Column `j` falls in bucket `k` when `2^k ≤ Σ_i M[i, j] + 1 < 2^{k+1}`.
//! The complexity is
//!
//! ```text
//! 𝔯_m(𝒢) = sup_k log 𝔼_z exp( m² R̂_m(𝒢_k(z))² / 2^{k+5} )
//! ```
//!
//! estimated by a plug-in: finite outer draws of `z`, a log-mean-exp over
//! them, and an exact (m ≤ 20) or Monte-Carlo inner Rademacher value.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::estimate::{BucketTerm, ComplexityEstimate, Method};
use super::matrix::LossMatrix;
use super::rademacher::{rademacher_auto, EXACT_RADEMACHER_MAX_ROWS};
use crate::error::{Error, Result};
use crate::rng::derive_seed;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeelingPartition {
    pub m: usize,
    pub buckets: BTreeMap<usize, Vec<usize>>,
}

impl PeelingPartition {
    pub fn bucket(&self, k: usize) -> &[usize] {
        self.buckets.get(&k).map_or(&[], Vec::as_slice)
    }
}

/// Bucket index of a column with sum `s ≥ 0`.
pub fn bucket_of(s: f64) -> usize {
    let t = s + 1.0;
    let mut k = t.log2().floor().max(0.0) as usize;
    while pow2(k + 1) <= t {
        k += 1;
    }
    while k > 0 && pow2(k) > t {
        k -= 1;
    }
    k
}

fn pow2(k: usize) -> f64 {
    2f64.powi(k as i32)
}

/// Largest bucket index reachable with column sums in `[0, m]`.
pub fn max_bucket(m: usize) -> usize {
    bucket_of(m as f64)
}

pub fn peel(m: &LossMatrix) -> Result<PeelingPartition> {
    for c in m.columns() {
        if let Some(v) = c.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::input(format!("peeling needs entries in [0, 1], found {v}")));
        }
    }
    let mut buckets: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (j, c) in m.columns().enumerate() {
        buckets.entry(bucket_of(c.iter().sum())).or_default().push(j);
    }
    Ok(PeelingPartition { m: m.rows(), buckets })
}

/// `m² R̂_m(𝒢_k)² / 2^{k+5}` for every `k ≤ max_bucket(m)` on one sample.
/// Empty buckets contribute zero.
pub fn peeling_terms(m: &LossMatrix, n_sigma: usize, seed: u64) -> Result<Vec<f64>> {
    let part = peel(m)?;
    let rows = m.rows() as f64;
    (0..=max_bucket(m.rows()))
        .map(|k| {
            let r = match m.select_columns(part.bucket(k)) {
                None => 0.0,
                Some(sub) => rademacher_auto(&sub, n_sigma, derive_seed(seed, &[k as u64]))?.value,
            };
            Ok(rows * rows * r * r / pow2(k + 5))
        })
        .collect()
}

/// Plug-in estimate of `𝔯_m(𝒢)` over `outer_trials` fresh samples.
///
/// `sampler(seed)` must return the loss matrix of the pool on a fresh sample.
pub fn peeling_complexity<F>(
    sampler: F,
    outer_trials: usize,
    n_sigma: usize,
    seed: u64,
) -> Result<ComplexityEstimate>
where
    F: Fn(u64) -> Result<LossMatrix> + Sync,
{
    if outer_trials < 2 {
        return Err(Error::input(format!(
            "peeling complexity needs at least 2 outer trials, got {outer_trials}"
        )));
    }
    let draws: Vec<(usize, Vec<f64>)> = (0..outer_trials)
        .into_par_iter()
        .map(|t| {
            let s = derive_seed(seed, &[0x4F55_5445, t as u64]);
            let mat = sampler(s)?;
            Ok((mat.rows(), peeling_terms(&mat, n_sigma, derive_seed(s, &[1]))?))
        })
        .collect::<Result<_>>()?;
    let rows = draws[0].0;
    if draws.iter().any(|(r, _)| *r != rows) {
        return Err(Error::input("sampler returned matrices with different sample sizes"));
    }
    let kmax = draws[0].1.len();
    let mut buckets = Vec::with_capacity(kmax);
    let mut best = (f64::NEG_INFINITY, 0.0);
    for k in 0..kmax {
        let xs: Vec<f64> = draws.iter().map(|(_, v)| v[k]).collect();
        let (lme, se) = log_mean_exp(&xs);
        buckets.push(BucketTerm { k, value: lme });
        if lme > best.0 {
            best = (lme, se);
        }
    }
    Ok(ComplexityEstimate {
        value: best.0,
        method: Method::MonteCarlo,
        outer_trials: Some(outer_trials),
        inner_trials: (rows > EXACT_RADEMACHER_MAX_ROWS).then_some(n_sigma),
        seed: Some(seed),
        stderr: Some(best.1),
        buckets,
    })
}

/// `log((1/n) Σ e^{x_t})` and its delta-method standard error.
pub fn log_mean_exp(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let top = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = xs.iter().map(|x| (x - top).exp()).collect();
    let mean = w.iter().sum::<f64>() / n;
    let var = if xs.len() > 1 {
        w.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    (top + mean.ln(), (var / n).sqrt() / mean)
}
