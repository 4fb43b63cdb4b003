//! Brute-force fat-shattering on small pools.

use std::collections::HashSet;

use super::matrix::LossMatrix;
use crate::error::{Error, Result};

pub const SHATTER_MAX_POINTS: usize = 10;
pub const SHATTER_MAX_POOL: usize = 50;

/// Midpoints of the sorted distinct entries of the matrix.
pub fn default_witness_grid(m: &LossMatrix) -> Vec<f64> {
    let mut vals: Vec<f64> = m.columns().flatten().copied().collect();
    vals.sort_by(f64::total_cmp);
    vals.dedup();
    vals.windows(2).map(|w| (w[0] + w[1]) / 2.0).collect()
}

/// Size of the largest set of rows `γ`-shattered by the columns, with every
/// witness drawn from `witness_grid` (defaults to [`default_witness_grid`]).
///
/// Restricting witnesses to a grid makes this a lower bound on `fat_γ`.
pub fn fat_shattering_exact(m: &LossMatrix, gamma: f64, witness_grid: Option<&[f64]>) -> Result<usize> {
    if m.rows() > SHATTER_MAX_POINTS || m.cols() > SHATTER_MAX_POOL {
        return Err(Error::capability(format!(
            "fat-shattering search supports at most {SHATTER_MAX_POINTS} points and \
             {SHATTER_MAX_POOL} functions, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    if !(gamma > 0.0) {
        return Err(Error::input(format!("gamma must be positive, got {gamma}")));
    }
    let default;
    let grid = match witness_grid {
        Some(g) => g,
        None => {
            default = default_witness_grid(m);
            &default
        }
    };
    // Shattering s points needs 2^s distinct columns.
    let cap = (usize::BITS - 1 - m.cols().leading_zeros()) as usize;
    for size in (1..=m.rows().min(cap)).rev() {
        let mut subset = Vec::with_capacity(size);
        if any_subset_shattered(m, gamma, grid, size, 0, &mut subset) {
            return Ok(size);
        }
    }
    Ok(0)
}

fn any_subset_shattered(
    m: &LossMatrix,
    gamma: f64,
    grid: &[f64],
    size: usize,
    start: usize,
    subset: &mut Vec<usize>,
) -> bool {
    if subset.len() == size {
        let patterns = vec![Some(0u64); m.cols()];
        return witnesses_exist(m, gamma, grid, subset, 0, &patterns);
    }
    for i in start..m.rows() {
        subset.push(i);
        if any_subset_shattered(m, gamma, grid, size, i + 1, subset) {
            return true;
        }
        subset.pop();
    }
    false
}

/// Assign witnesses point by point; `patterns[j]` is the partial bit pattern
/// column `j` realizes on the points assigned so far, or `None` once it falls
/// inside a margin band.
fn witnesses_exist(
    m: &LossMatrix,
    gamma: f64,
    grid: &[f64],
    points: &[usize],
    depth: usize,
    patterns: &[Option<u64>],
) -> bool {
    if depth == points.len() {
        return true;
    }
    let row = points[depth];
    let needed = 1usize << (depth + 1);
    for &r in grid {
        let next: Vec<Option<u64>> = patterns
            .iter()
            .enumerate()
            .map(|(j, p)| {
                let p = (*p)?;
                let v = m.get(row, j);
                if v >= r + gamma {
                    Some(p << 1 | 1)
                } else if v <= r - gamma {
                    Some(p << 1)
                } else {
                    None
                }
            })
            .collect();
        let distinct: HashSet<u64> = next.iter().flatten().copied().collect();
        if distinct.len() >= needed && witnesses_exist(m, gamma, grid, points, depth + 1, &next) {
            return true;
        }
    }
    false
}
