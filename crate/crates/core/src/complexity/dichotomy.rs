use std::collections::HashSet;

use super::matrix::LossMatrix;
use crate::error::Result;

/// `𝕊_𝒢(z_1^m)`: number of distinct behavior vectors of a binary pool.
pub fn count_dichotomies(m: &LossMatrix) -> Result<usize> {
    m.require_binary("dichotomy counting")?;
    let words = m.rows().div_ceil(64);
    let distinct: HashSet<Vec<u64>> = m
        .columns()
        .map(|c| {
            let mut bits = vec![0u64; words];
            for (i, &v) in c.iter().enumerate() {
                if v == 1.0 {
                    bits[i / 64] |= 1 << (i % 64);
                }
            }
            bits
        })
        .collect();
    Ok(distinct.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexity::matrix::RangeTag;
    use crate::error::Error;

    #[test]
    fn examples() {
        let same = LossMatrix::from_columns(vec![vec![1.0, 0.0, 1.0]; 5], RangeTag::Binary).unwrap();
        assert_eq!(count_dichotomies(&same).unwrap(), 1);

        // thresholds 1{x ≤ t} on points x = 1, 2, 3: t below all, between, above all
        let xs = [1.0, 2.0, 3.0];
        let cols: Vec<Vec<f64>> = [0.5, 1.5, 2.5, 3.5, 0.7, 3.9]
            .iter()
            .map(|&t| xs.iter().map(|&x| if x <= t { 1.0 } else { 0.0 }).collect())
            .collect();
        let th = LossMatrix::from_columns(cols, RangeTag::Binary).unwrap();
        assert_eq!(count_dichotomies(&th).unwrap(), 4);

        let all: Vec<Vec<f64>> = (0..8u32)
            .map(|b| (0..3).map(|i| f64::from((b >> i) & 1)).collect())
            .collect();
        let full = LossMatrix::from_columns(all, RangeTag::Binary).unwrap();
        assert_eq!(count_dichotomies(&full).unwrap(), 8);
    }

    #[test]
    fn non_binary_rejected() {
        let m = LossMatrix::from_columns(vec![vec![0.5]], RangeTag::UnitInterval).unwrap();
        assert!(matches!(count_dichotomies(&m), Err(Error::Input(_))));
    }
}
