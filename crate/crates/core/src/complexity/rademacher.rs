//! Empirical Rademacher complexity `𝔼_σ sup_j (1/m) Σ_i σ_i M[i, j]` of a finite pool.

use rand::Rng;
use rayon::prelude::*;

use super::estimate::ComplexityEstimate;
use super::matrix::LossMatrix;
use crate::error::{Error, Result};
use crate::rng::substream;

/// Largest sample size accepted by exact sign enumeration.
pub const EXACT_RADEMACHER_MAX_ROWS: usize = 20;

const GRAY_BITS: usize = 12;
const MC_BATCH: usize = 1024;

/// Exact expectation over all `2^m` sign vectors.
pub fn rademacher_exact(m: &LossMatrix) -> Result<ComplexityEstimate> {
    let rows = m.rows();
    if rows > EXACT_RADEMACHER_MAX_ROWS {
        return Err(Error::capability(format!(
            "exact Rademacher enumeration supports m ≤ {EXACT_RADEMACHER_MAX_ROWS}, got {rows}"
        )));
    }
    Ok(ComplexityEstimate::exact(exact_value(m)))
}

fn exact_value(m: &LossMatrix) -> f64 {
    let rows = m.rows();
    let low = rows.min(GRAY_BITS);
    let high = rows - low;
    // Each chunk fixes the signs of the top `high` rows and walks the low rows in Gray order.
    let chunk_sums: Vec<f64> = (0..1u64 << high)
        .into_par_iter()
        .map(|hi| {
            let sign = |i: usize| -> f64 {
                if i >= low && (hi >> (i - low)) & 1 == 1 {
                    1.0
                } else {
                    -1.0
                }
            };
            let mut sums: Vec<f64> = m
                .columns()
                .map(|c| c.iter().enumerate().map(|(i, v)| sign(i) * v).sum())
                .collect();
            let mut signs: Vec<f64> = (0..low).map(sign).collect();
            let mut acc = max_of(&sums);
            for step in 1u64..1 << low {
                let bit = step.trailing_zeros() as usize;
                signs[bit] = -signs[bit];
                let s2 = 2.0 * signs[bit];
                for (j, s) in sums.iter_mut().enumerate() {
                    *s += s2 * m.get(bit, j);
                }
                acc += max_of(&sums);
            }
            acc
        })
        .collect();
    let total: f64 = chunk_sums.iter().sum();
    total / (1u64 << rows) as f64 / rows as f64
}

fn max_of(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

/// `sup_j (1/m) Σ_i σ_i M[i, j]` for one sign vector.
pub fn sup_correlation(m: &LossMatrix, sigma: &[f64]) -> f64 {
    let rows = m.rows() as f64;
    m.columns()
        .map(|c| c.iter().zip(sigma).map(|(v, s)| v * s).sum::<f64>() / rows)
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Monte-Carlo estimate from `n_sigma` sign vectors with its standard error.
pub fn rademacher_mc(m: &LossMatrix, n_sigma: usize, seed: u64) -> Result<ComplexityEstimate> {
    if n_sigma < 2 {
        return Err(Error::input(format!(
            "Monte-Carlo Rademacher estimate needs at least 2 sign draws, got {n_sigma}"
        )));
    }
    let draws = mc_draws(m, n_sigma, seed);
    let n = draws.len() as f64;
    let mean = draws.iter().sum::<f64>() / n;
    let var = draws.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / (n - 1.0);
    Ok(ComplexityEstimate::monte_carlo(mean, (var / n).sqrt(), n_sigma, seed))
}

fn mc_draws(m: &LossMatrix, n_sigma: usize, seed: u64) -> Vec<f64> {
    let batches = n_sigma.div_ceil(MC_BATCH);
    let per_batch: Vec<Vec<f64>> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = substream(seed, &[0x5349_474D, b as u64]);
            let count = MC_BATCH.min(n_sigma - b * MC_BATCH);
            let mut sigma = vec![0.0; m.rows()];
            (0..count)
                .map(|_| {
                    sigma
                        .iter_mut()
                        .for_each(|s| *s = if rng.random::<bool>() { 1.0 } else { -1.0 });
                    sup_correlation(m, &sigma)
                })
                .collect()
        })
        .collect();
    per_batch.concat()
}

/// Exact when `m ≤ 20`, otherwise Monte Carlo with `n_sigma` draws.
pub fn rademacher_auto(m: &LossMatrix, n_sigma: usize, seed: u64) -> Result<ComplexityEstimate> {
    if m.rows() <= EXACT_RADEMACHER_MAX_ROWS {
        rademacher_exact(m)
    } else {
        rademacher_mc(m, n_sigma, seed)
    }
}
