//! Upper bounds on the peeling-based complexity: dichotomy counts,
//! a discretized entropy integral, and the smoothed-margin closed form.

use std::f64::consts::PI;

use rayon::prelude::*;

use super::cover::{covering_number_l2, CoverMode, EXACT_COVER_MAX_POOL};
use super::dichotomy::count_dichotomies;
use super::estimate::{ComplexityEstimate, Method};
use super::matrix::LossMatrix;
use super::peeling::peel;
use crate::error::{Error, Result};
use crate::rng::derive_seed;

/// `(1/8) log 𝔼_z[𝕊_𝒢(z)]` with the expectation replaced by a mean over `trials` draws.
pub fn rm_upper_dichotomy<F>(sampler: F, trials: usize, seed: u64) -> Result<ComplexityEstimate>
where
    F: Fn(u64) -> Result<LossMatrix> + Sync,
{
    if trials == 0 {
        return Err(Error::input("dichotomy bound needs at least one trial"));
    }
    let counts: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mat = sampler(derive_seed(seed, &[0x4449_4348, t as u64]))?;
            Ok(count_dichotomies(&mat)? as f64)
        })
        .collect::<Result<_>>()?;
    let n = counts.len() as f64;
    let mean = counts.iter().sum::<f64>() / n;
    let var = if trials > 1 {
        counts.iter().map(|c| (c - mean) * (c - mean)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    Ok(ComplexityEstimate {
        value: mean.ln() / 8.0,
        method: Method::MonteCarlo,
        outer_trials: Some(trials),
        inner_trials: None,
        seed: Some(seed),
        stderr: Some((var / n).sqrt() / (8.0 * mean)),
        buckets: Vec::new(),
    })
}

/// `(1/16)(1 + ∫_{1/√m}^1 log N₂(𝒢_k, √(2^k/m)·ε) dε)` on one sample, with the
/// integral replaced by the trapezoid rule on `eps_grid`.
///
/// Buckets with more than 25 members use greedy covers, which can only
/// enlarge the value.
pub fn rm_upper_dudley(m: &LossMatrix, k: usize, eps_grid: &[f64]) -> Result<f64> {
    let rows = m.rows() as f64;
    let lo = 1.0 / rows.sqrt();
    if eps_grid.len() < 2 {
        return Err(Error::input("entropy integral grid needs at least two points"));
    }
    if eps_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::input("entropy integral grid must be strictly increasing"));
    }
    let tol = 1e-12;
    if eps_grid[0] < lo - tol || eps_grid[eps_grid.len() - 1] > 1.0 + tol {
        return Err(Error::input(format!(
            "entropy integral grid must lie in [1/√m, 1] = [{lo}, 1]"
        )));
    }
    let part = peel(m)?;
    let Some(bucket) = m.select_columns(part.bucket(k)) else {
        return Ok(1.0 / 16.0);
    };
    let mode = if bucket.cols() <= EXACT_COVER_MAX_POOL {
        CoverMode::Exact
    } else {
        CoverMode::Greedy
    };
    let scale = (2f64.powi(k as i32) / rows).sqrt();
    let logs = eps_grid
        .iter()
        .map(|&e| Ok(covering_number_l2(&bucket, scale * e, mode)?.value.ln()))
        .collect::<Result<Vec<f64>>>()?;
    Ok((1.0 + trapezoid(eps_grid, &logs)) / 16.0)
}

pub fn trapezoid(xs: &[f64], ys: &[f64]) -> f64 {
    xs.windows(2)
        .zip(ys.windows(2))
        .map(|(x, y)| (x[1] - x[0]) * (y[0] + y[1]) / 2.0)
        .sum()
}

/// `16 π² m / ρ²`, the leading factor of the smoothed-margin bound.
pub fn smooth_leading_factor(rho: f64, m: f64) -> f64 {
    16.0 * PI * PI * m / (rho * rho)
}

/// `(16π²m/ρ²) (R̂^max)² (2 log^{3/2}(m/R̂^max) − log^{3/2}(2πm/(ρ R̂^max)))²`.
pub fn rm_upper_smooth(rho: f64, m: f64, rmax: f64) -> Result<f64> {
    if !(rho > 0.0) || !(m >= 1.0) {
        return Err(Error::input(format!("need rho > 0 and m ≥ 1, got rho={rho}, m={m}")));
    }
    if !(rmax > 0.0 && rmax < m) {
        return Err(Error::domain(format!("worst-case Rademacher value must lie in (0, m), got {rmax}")));
    }
    let a = m / rmax;
    let b = 2.0 * PI * m / (rho * rmax);
    if !(a > 1.0 && b > 1.0) {
        return Err(Error::domain(format!(
            "smoothed-margin bound needs log arguments > 1, got {a} and {b}"
        )));
    }
    let bracket = 2.0 * a.ln().powf(1.5) - b.ln().powf(1.5);
    Ok(smooth_leading_factor(rho, m) * rmax * rmax * bracket * bracket)
}
