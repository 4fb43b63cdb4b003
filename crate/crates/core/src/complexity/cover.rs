//! Empirical covering numbers of a finite pool.
//!
//! Covers are proper: centers are pool members, and a column is covered when
//! its distance to some center is at most `eps`.

use serde::{Deserialize, Serialize};

use super::estimate::ComplexityEstimate;
use super::matrix::LossMatrix;
use crate::error::{Error, Result};

/// Largest pool accepted by the exact (branch-and-bound) search.
pub const EXACT_COVER_MAX_POOL: usize = 25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoverMode {
    Exact,
    Greedy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Metric {
    /// `max_i |f(z_i) - g(z_i)|`
    LInf,
    /// `((1/m) Σ (f(z_i) - g(z_i))²)^{1/2}`
    L2,
}

impl Metric {
    pub fn distance(self, a: &[f64], b: &[f64]) -> f64 {
        match self {
            Metric::LInf => a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max),
            Metric::L2 => {
                let ss: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
                (ss / a.len() as f64).sqrt()
            }
        }
    }
}

/// `𝒩_∞(ℱ, eps, z_1^m)` over the pool columns.
pub fn covering_number_linf(m: &LossMatrix, eps: f64, mode: CoverMode) -> Result<ComplexityEstimate> {
    covering_number(m, eps, Metric::LInf, mode)
}

/// `𝒩_2(ℱ, eps, z_1^m)` with the normalized ℓ2 metric.
pub fn covering_number_l2(m: &LossMatrix, eps: f64, mode: CoverMode) -> Result<ComplexityEstimate> {
    covering_number(m, eps, Metric::L2, mode)
}

pub fn covering_number(
    m: &LossMatrix,
    eps: f64,
    metric: Metric,
    mode: CoverMode,
) -> Result<ComplexityEstimate> {
    let centers = cover_centers(m, eps, metric, mode)?;
    let n = centers.len() as f64;
    Ok(match mode {
        CoverMode::Exact => ComplexityEstimate::exact(n),
        CoverMode::Greedy => ComplexityEstimate::greedy(n),
    })
}

/// Indices of the chosen cover centers.
pub fn cover_centers(m: &LossMatrix, eps: f64, metric: Metric, mode: CoverMode) -> Result<Vec<usize>> {
    if !(eps > 0.0) || eps.is_nan() {
        return Err(Error::input(format!("cover radius must be positive, got {eps}")));
    }
    let p = m.cols();
    if mode == CoverMode::Exact && p > EXACT_COVER_MAX_POOL {
        return Err(Error::capability(format!(
            "exact cover search supports at most {EXACT_COVER_MAX_POOL} pool members, got {p}"
        )));
    }
    let reach = reach_sets(m, eps, metric);
    Ok(match mode {
        CoverMode::Greedy => greedy_cover(&reach, p),
        CoverMode::Exact => exact_cover(&reach, p),
    })
}

/// Size of a greedily built set of columns pairwise farther than `2·eps`
/// apart. No proper `eps`-cover can be smaller.
pub fn packing_lower_bound(m: &LossMatrix, eps: f64, metric: Metric) -> usize {
    let mut chosen: Vec<usize> = Vec::new();
    for j in 0..m.cols() {
        if chosen
            .iter()
            .all(|&c| metric.distance(m.column(c), m.column(j)) > 2.0 * eps)
        {
            chosen.push(j);
        }
    }
    chosen.len()
}

/// `reach[c]` = bitset of columns within `eps` of column `c`.
fn reach_sets(m: &LossMatrix, eps: f64, metric: Metric) -> Vec<Vec<u64>> {
    let p = m.cols();
    let words = p.div_ceil(64);
    let mut reach = vec![vec![0u64; words]; p];
    for a in 0..p {
        reach[a][a / 64] |= 1 << (a % 64);
        for b in a + 1..p {
            if metric.distance(m.column(a), m.column(b)) <= eps {
                reach[a][b / 64] |= 1 << (b % 64);
                reach[b][a / 64] |= 1 << (a % 64);
            }
        }
    }
    reach
}

fn greedy_cover(reach: &[Vec<u64>], p: usize) -> Vec<usize> {
    let words = p.div_ceil(64);
    let mut uncovered = vec![0u64; words];
    for j in 0..p {
        uncovered[j / 64] |= 1 << (j % 64);
    }
    let mut centers = Vec::new();
    while uncovered.iter().any(|&w| w != 0) {
        let (best, _) = reach
            .iter()
            .enumerate()
            .map(|(c, r)| (c, overlap(r, &uncovered)))
            .fold((0, 0), |acc, (c, n)| if n > acc.1 { (c, n) } else { acc });
        for (u, r) in uncovered.iter_mut().zip(&reach[best]) {
            *u &= !r;
        }
        centers.push(best);
    }
    centers
}

fn overlap(a: &[u64], b: &[u64]) -> u32 {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones()).sum()
}

/// Branch and bound over the first uncovered column; greedy seeds the incumbent.
fn exact_cover(reach: &[Vec<u64>], p: usize) -> Vec<usize> {
    let masks: Vec<u32> = reach.iter().map(|r| r[0] as u32).collect();
    let mut best = greedy_cover(reach, p);
    let full: u32 = if p == 32 { u32::MAX } else { (1u32 << p) - 1 };
    let mut current = Vec::new();
    branch(&masks, full, &mut current, &mut best);
    best.sort_unstable();
    best
}

fn branch(masks: &[u32], uncovered: u32, current: &mut Vec<usize>, best: &mut Vec<usize>) {
    if uncovered == 0 {
        if current.len() < best.len() {
            *best = current.clone();
        }
        return;
    }
    let largest = masks.iter().map(|m| (m & uncovered).count_ones()).max().unwrap_or(0);
    let lower = uncovered.count_ones().div_ceil(largest) as usize;
    if current.len() + lower >= best.len() {
        return;
    }
    let e = uncovered.trailing_zeros();
    let mut options: Vec<usize> = (0..masks.len()).filter(|&c| masks[c] >> e & 1 == 1).collect();
    options.sort_by_key(|&c| std::cmp::Reverse((masks[c] & uncovered).count_ones()));
    for c in options {
        current.push(c);
        branch(masks, uncovered & !masks[c], current, best);
        current.pop();
    }
}
