//! Numeric checks of two auxiliary facts the symmetrization argument uses:
//! binomial tails beyond the mean carry more than a quarter of the mass, and
//! `(x − y)/(x + y + η)^{1/α}` is monotone in each argument.

use marginbound::rng::substream;
use marginbound::{Error, Result};
use rand::Rng;
use serde::{Deserialize, Serialize};

pub const BINOMIAL_MAX_M: u64 = 2000;
/// Grid points per trial count `m`.
pub const BINOMIAL_GRID: u64 = 200;

fn log_factorials(n: u64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut acc = 0.0f64;
    out.push(0.0);
    for i in 1..=n {
        acc += (i as f64).ln();
        out.push(acc);
    }
    out
}

/// Log of the binomial pmf table for `B(m, p)`.
fn log_pmf(m: u64, p: f64, lf: &[f64]) -> Vec<f64> {
    let (lp, lq) = (p.ln(), (-p).ln_1p());
    (0..=m)
        .map(|k| lf[m as usize] - lf[k as usize] - lf[(m - k) as usize] + k as f64 * lp + (m - k) as f64 * lq)
        .collect()
}

fn log_sum_exp(xs: &[f64]) -> f64 {
    let mx = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if mx == f64::NEG_INFINITY {
        return mx;
    }
    mx + xs.iter().map(|x| (x - mx).exp()).sum::<f64>().ln()
}

/// `Pr[X ≥ k]` for `X ~ B(m, p)`.
pub fn binomial_upper_tail(m: u64, p: f64, k: u64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    if k > m {
        return 0.0;
    }
    let lf = log_factorials(m);
    log_sum_exp(&log_pmf(m, p, &lf)[k as usize..]).exp()
}

/// `Pr[X ≤ k]` for `X ~ B(m, p)`.
pub fn binomial_lower_tail(m: u64, p: f64, k: u64) -> f64 {
    if k >= m {
        return 1.0;
    }
    let lf = log_factorials(m);
    log_sum_exp(&log_pmf(m, p, &lf)[..=k as usize]).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailWitness {
    pub m: u64,
    pub p: f64,
    /// The integer threshold `⌈mp⌉` (upper tail) or `⌊mp⌋` (lower tail).
    pub threshold: u64,
    pub probability: f64,
}

pub const VERIFY_SCHEMA: &str = "marginbound.verify.v1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinomialReport {
    pub schema: String,
    pub m_max: u64,
    pub grid_points: u64,
    pub checks: u64,
    /// Smallest `Pr[X ≥ mp]` over `p ∈ (1/m, 1)`.
    pub min_upper: Option<TailWitness>,
    /// Smallest `Pr[X ≤ mp]` over `p ∈ (0, 1 − 1/m)`.
    pub min_lower: Option<TailWitness>,
    pub failures: u64,
    pub holds: bool,
}

/// Check both tail statements exactly for every `2 ≤ m ≤ m_max` on a grid of
/// 200 interior points of each valid range. For `m = 1` both ranges are empty.
///
/// Grid points are kept as integer fractions so `mp` and its ceiling/floor are
/// exact: `p_j = ((N+1) + (m−1)(j+1)) / (m(N+1))` on `(1/m, 1)` and
/// `p_j = (m−1)(j+1) / (m(N+1))` on `(0, 1 − 1/m)`, `j < N`.
pub fn verify_binomial_lemma(m_max: u64) -> Result<BinomialReport> {
    if m_max == 0 || m_max > BINOMIAL_MAX_M {
        return Err(Error::Input(format!("m_max must lie in [1, {BINOMIAL_MAX_M}], got {m_max}")));
    }
    let n = BINOMIAL_GRID;
    let lf = log_factorials(m_max);
    let mut report = BinomialReport {
        schema: VERIFY_SCHEMA.to_string(),
        m_max,
        grid_points: n,
        checks: 0,
        min_upper: None,
        min_lower: None,
        failures: 0,
        holds: true,
    };
    let keep_min = |slot: &mut Option<TailWitness>, w: TailWitness| {
        if slot.is_none_or(|s| w.probability < s.probability) {
            *slot = Some(w);
        }
    };
    for m in 2..=m_max {
        let den = m * (n + 1);
        for j in 0..n {
            // upper tail: mp = ((N+1) + (m−1)(j+1)) / (N+1)
            let num = (n + 1) + (m - 1) * (j + 1);
            let p = num as f64 / den as f64;
            let k = num.div_ceil(n + 1);
            let pmf = log_pmf(m, p, &lf);
            let prob = log_sum_exp(&pmf[k as usize..]).exp();
            report.checks += 1;
            if !(prob > 0.25) {
                report.failures += 1;
            }
            keep_min(&mut report.min_upper, TailWitness { m, p, threshold: k, probability: prob });

            // lower tail: mp = (m−1)(j+1) / (N+1)
            let num = (m - 1) * (j + 1);
            let p = num as f64 / den as f64;
            let k = num / (n + 1);
            let pmf = log_pmf(m, p, &lf);
            let prob = log_sum_exp(&pmf[..=k as usize]).exp();
            report.checks += 1;
            if !(prob > 0.25) {
                report.failures += 1;
            }
            keep_min(&mut report.min_lower, TailWitness { m, p, threshold: k, probability: prob });
        }
    }
    report.holds = report.failures == 0;
    Ok(report)
}

/// `F(x, y) = (x − y)/(x + y + η)^{1/α}`.
pub fn monotone_ratio(x: f64, y: f64, eta: f64, alpha: f64) -> f64 {
    (x - y) / (x + y + eta).powf(1.0 / alpha)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotoneReport {
    pub schema: String,
    pub points: usize,
    pub perturbation: f64,
    pub x_failures: usize,
    pub y_failures: usize,
    /// Smallest observed `F(x+δ, y) − F(x, y)`.
    pub min_x_gain: f64,
    /// Smallest observed `F(x, y) − F(x, y+δ)`.
    pub min_y_drop: f64,
    pub holds: bool,
}

/// Probe monotonicity of [`monotone_ratio`] at `points` random
/// `(x, y, η, α) ∈ (0, 10)² × (10⁻³, 1) × (1, 2]`.
pub fn verify_monotone_ratio(points: usize, perturbation: f64, seed: u64) -> Result<MonotoneReport> {
    if points == 0 || !(perturbation > 0.0) {
        return Err(Error::Input("need at least one point and a positive perturbation".into()));
    }
    let mut rng = substream(seed, &[0x4D4F_4E4F]);
    let mut r = MonotoneReport {
        schema: VERIFY_SCHEMA.to_string(),
        points,
        perturbation,
        x_failures: 0,
        y_failures: 0,
        min_x_gain: f64::INFINITY,
        min_y_drop: f64::INFINITY,
        holds: true,
    };
    for _ in 0..points {
        let x = 10.0 * (1.0 - rng.random::<f64>());
        let y = 10.0 * (1.0 - rng.random::<f64>());
        let eta = 1e-3 + (1.0 - 1e-3) * rng.random::<f64>();
        let alpha = 2.0 - rng.random::<f64>();
        let f = monotone_ratio(x, y, eta, alpha);
        let gx = monotone_ratio(x + perturbation, y, eta, alpha) - f;
        let dy = f - monotone_ratio(x, y + perturbation, eta, alpha);
        if !(gx > 0.0) {
            r.x_failures += 1;
        }
        if !(dy > 0.0) {
            r.y_failures += 1;
        }
        r.min_x_gain = r.min_x_gain.min(gx);
        r.min_y_drop = r.min_y_drop.min(dy);
    }
    r.holds = r.x_failures == 0 && r.y_failures == 0;
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tail_examples() {
        // Σ_{k≥5} C(10,k) / 2¹⁰ = 638/1024
        assert!((binomial_upper_tail(10, 0.5, 5) - 638.0 / 1024.0).abs() < 1e-14);
        assert!((binomial_upper_tail(2, 0.9, 2) - 0.81).abs() < 1e-14);
        assert!((binomial_lower_tail(10, 0.5, 5) - 638.0 / 1024.0).abs() < 1e-14);
        assert_eq!(binomial_upper_tail(5, 0.3, 0), 1.0);
    }

    #[test]
    fn grid_stays_strictly_inside() {
        let r = verify_binomial_lemma(30).unwrap();
        assert!(r.holds);
        let lo = r.min_lower.unwrap();
        let up = r.min_upper.unwrap();
        assert!(up.p > 1.0 / up.m as f64 && up.p < 1.0);
        assert!(lo.p > 0.0 && lo.p < 1.0 - 1.0 / lo.m as f64);
        assert_eq!(r.checks, 29 * 2 * BINOMIAL_GRID);
        assert!(verify_binomial_lemma(0).is_err());
        assert!(verify_binomial_lemma(2001).is_err());
    }

    #[test]
    fn smallest_upper_tail_is_at_m2_first_grid_point() {
        // p just above 1/2 at m = 2 leaves only Pr[X = 2] = p²
        let r = verify_binomial_lemma(2).unwrap();
        let w = r.min_upper.unwrap();
        let p = (201.0 + 1.0) / 402.0;
        assert_eq!((w.m, w.threshold), (2, 2));
        assert!((w.probability - p * p).abs() < 1e-15);
    }

    #[test]
    fn ratio_monotone() {
        let r = verify_monotone_ratio(2000, 1e-6, 3).unwrap();
        assert!(r.holds, "{r:?}");
    }
}
