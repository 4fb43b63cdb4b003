//! New-form versus old-form margin bounds.
//!
//! New: `emp + 2√(emp·β) + β`. Old: `emp + c′√β′`. With `β = β′` by default
//! and `c′ = 1` (the choice most favorable to the old form).

use marginbound::complexity::{fat_dim_formula, worst_case_rademacher, FatDimParams};
use marginbound::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TightnessConfig {
    /// Classes whose β is computed from the leading-order formula on the
    /// `(m, ρ)` grid: fat-shattering classes give `fat_ρ/m`, the
    /// spectral-norm class gives `(R̂^max)²`.
    #[serde(default)]
    pub classes: Vec<FatDimParams>,
    #[serde(default)]
    pub m_grid: Vec<u64>,
    #[serde(default)]
    pub rho_grid: Vec<f64>,
    /// Explicit β values, used in addition to the class-derived ones.
    #[serde(default)]
    pub beta_grid: Vec<f64>,
    pub emp_grid: Vec<f64>,
    #[serde(default = "one")]
    pub c_prime: f64,
    /// Ratio `β′/β`.
    #[serde(default = "one")]
    pub beta_ratio: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TightnessRow {
    pub source: String,
    pub m: Option<u64>,
    pub rho: Option<f64>,
    pub beta: f64,
    pub beta_prime: f64,
    pub emp: f64,
    pub new_value: f64,
    pub old_value: f64,
    pub new_smaller: bool,
    /// Largest `emp` below which the new form is strictly smaller; absent when
    /// the new form never wins at this β.
    pub crossover_emp: Option<f64>,
}

pub const TIGHTNESS_CSV_HEADER: &str =
    "source,m,rho,beta,beta_prime,emp,new_value,old_value,new_smaller,crossover_emp";

pub const TIGHTNESS_SCHEMA: &str = "marginbound.tightness.v1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TightnessReport {
    pub schema: String,
    pub c_prime: f64,
    pub beta_ratio: f64,
    pub rows: Vec<TightnessRow>,
    pub new_smaller_count: usize,
    /// Rows with `emp = 0` and `β = β′ ≤ 1`, where the new form cannot lose.
    pub zero_emp_rows: usize,
    pub zero_emp_new_not_larger: bool,
}

pub fn new_form(emp: f64, beta: f64) -> f64 {
    emp + 2.0 * (emp * beta).sqrt() + beta
}

pub fn old_form(emp: f64, beta_prime: f64, c_prime: f64) -> f64 {
    emp + c_prime * beta_prime.sqrt()
}

/// Both forms carry `emp`, so the new one is smaller iff
/// `2√(emp·β) + β < c′√β′`, i.e. `emp < (c′√β′ − β)² / (4β)` when
/// `c′√β′ > β`. With `β = 0` the new form wins at every `emp` as long as
/// `β′ > 0`.
pub fn crossover_emp(beta: f64, beta_prime: f64, c_prime: f64) -> Option<f64> {
    let gap = c_prime * beta_prime.sqrt() - beta;
    if gap <= 0.0 {
        return None;
    }
    if beta == 0.0 {
        return Some(f64::INFINITY);
    }
    Some(gap * gap / (4.0 * beta))
}

fn class_name(c: &FatDimParams) -> &'static str {
    match c {
        FatDimParams::Linear { .. } => "linear",
        FatDimParams::Ensemble { .. } => "ensemble",
        FatDimParams::FfnnFat { .. } => "ffnn-fat",
        FatDimParams::FfnnSpectral { .. } => "ffnn-spectral",
    }
}

/// Leading-order β for a class at `(m, ρ)`.
pub fn class_beta(c: &FatDimParams, m: u64, rho: f64) -> Result<f64> {
    let at = c.clone().with_rho(rho);
    match at {
        FatDimParams::FfnnSpectral { .. } => {
            let r = worst_case_rademacher(&at, m as f64)?;
            Ok(r * r)
        }
        _ => Ok(fat_dim_formula(&at)? / m as f64),
    }
}

pub fn compare_tightness(cfg: &TightnessConfig) -> Result<TightnessReport> {
    if cfg.emp_grid.is_empty() {
        return Err(Error::Input("emp_grid is empty".into()));
    }
    if let Some(e) = cfg.emp_grid.iter().find(|e| !(0.0..=1.0).contains(*e)) {
        return Err(Error::Input(format!("empirical losses must lie in [0, 1], got {e}")));
    }
    if !(cfg.c_prime > 0.0) || !(cfg.beta_ratio > 0.0) {
        return Err(Error::Input("c_prime and beta_ratio must be positive".into()));
    }
    if !cfg.classes.is_empty() && (cfg.m_grid.is_empty() || cfg.rho_grid.is_empty()) {
        return Err(Error::Input("class-derived β needs nonempty m_grid and rho_grid".into()));
    }
    if cfg.classes.is_empty() && cfg.beta_grid.is_empty() {
        return Err(Error::Input("give classes or beta_grid".into()));
    }
    let mut betas: Vec<(String, Option<u64>, Option<f64>, f64)> = Vec::new();
    for c in &cfg.classes {
        c.validate()?;
        for &m in &cfg.m_grid {
            for &rho in &cfg.rho_grid {
                betas.push((class_name(c).to_string(), Some(m), Some(rho), class_beta(c, m, rho)?));
            }
        }
    }
    for &b in &cfg.beta_grid {
        if !(b >= 0.0 && b.is_finite()) {
            return Err(Error::Input(format!("β must be finite and nonnegative, got {b}")));
        }
        betas.push(("beta-grid".to_string(), None, None, b));
    }
    let mut rows = Vec::new();
    for (source, m, rho, beta) in betas {
        let beta_prime = beta * cfg.beta_ratio;
        let cross = crossover_emp(beta, beta_prime, cfg.c_prime);
        for &emp in &cfg.emp_grid {
            let new_value = new_form(emp, beta);
            let old_value = old_form(emp, beta_prime, cfg.c_prime);
            rows.push(TightnessRow {
                source: source.clone(),
                m,
                rho,
                beta,
                beta_prime,
                emp,
                new_value,
                old_value,
                new_smaller: new_value < old_value,
                crossover_emp: cross,
            });
        }
    }
    let zero: Vec<&TightnessRow> = rows
        .iter()
        .filter(|r| r.emp == 0.0 && r.beta == r.beta_prime && r.beta <= 1.0)
        .collect();
    Ok(TightnessReport {
        schema: TIGHTNESS_SCHEMA.to_string(),
        c_prime: cfg.c_prime,
        beta_ratio: cfg.beta_ratio,
        new_smaller_count: rows.iter().filter(|r| r.new_smaller).count(),
        zero_emp_rows: zero.len(),
        zero_emp_new_not_larger: cfg.c_prime < 1.0 || zero.iter().all(|r| r.new_value <= r.old_value),
        rows,
    })
}

impl TightnessReport {
    pub fn csv_rows(&self, digits: usize) -> Vec<String> {
        let num = |x: f64| marginbound::numfmt::format_sig(x, digits);
        self.rows
            .iter()
            .map(|r| {
                format!(
                    "{},{},{},{},{},{},{},{},{},{}",
                    r.source,
                    r.m.map(|v| v.to_string()).unwrap_or_default(),
                    r.rho.map(num).unwrap_or_default(),
                    num(r.beta),
                    num(r.beta_prime),
                    num(r.emp),
                    num(r.new_value),
                    num(r.old_value),
                    r.new_smaller,
                    r.crossover_emp.map(num).unwrap_or_default()
                )
            })
            .collect()
    }
}
