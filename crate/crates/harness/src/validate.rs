//! Monte-Carlo coverage campaigns.
//!
//! Each trial draws a fresh sample, evaluates the requested bounds and checks
//! them against the true risk. In pool mode the event is uniform over a fixed
//! pool of linear predictors: a trial violates when any member's true risk
//! exceeds its bound. Complexity inputs depend only on the distribution and
//! the pool, so they are estimated once per campaign.

use std::collections::BTreeMap;

use marginbound::bounds::{
    bound_cov_alpha, bound_cov_alpha2, bound_cov_fat, bound_cov_uniform_rho, bound_rad, bound_rad_all_alpha,
    bound_rad_smooth, bound_unbounded, bound_unbounded_uniform_rho, BoundReport, Family,
};
use marginbound::complexity::{
    covering_number_linf, fat_dim_formula, peeling_complexity, worst_case_rademacher, CoverMode, FatDimParams,
    LossMatrix, Method, RangeTag,
};
use marginbound::complexity::cover::EXACT_COVER_MAX_POOL;
use marginbound::distribution::{RiskMode, SyntheticDistribution};
use marginbound::hypothesis::{truncate, Linear};
use marginbound::risk::{losses, moment_of, UnboundedLoss};
use marginbound::rng::{derive_seed, substream};
use marginbound::{Error, Hypothesis, LabeledSample, MarginTransform, Result, TruncationSpec};
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{Beta, ContinuousCDF};

use crate::config::{CoverSearch, ExperimentConfig, ValidationMode};
use crate::train::{train, TrainerSpec};

pub const VALIDITY_SCHEMA: &str = "marginbound.validity.v1";
pub const VALIDITY_CSV_HEADER: &str = "family,trial,emp,complexity,bound,true_risk,violated";

const KEY_POOL: u64 = 0x504F_4F4C;
const KEY_TRIAL: u64 = 0x5452_4941;
const KEY_COVER: u64 = 0x434F_5645;
const KEY_PEEL: u64 = 0x5045_454C;
const KEY_HOLDOUT: u64 = 0x484F_4C44;

/// Outcome of one family in one trial, for the CSV table. In pool mode this
/// is the member with the largest `true − bound`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRow {
    pub family: Family,
    pub trial: usize,
    pub emp: f64,
    pub complexity: f64,
    pub bound: f64,
    pub true_risk: f64,
    pub violated: bool,
}

/// How a family's complexity input was obtained.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexityInput {
    pub value: f64,
    pub method: Method,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyValidity {
    pub family: Family,
    pub trials: usize,
    pub violations: usize,
    pub violation_rate: f64,
    /// Exact (Clopper–Pearson) 95% interval for the violation probability.
    pub ci_low: f64,
    pub ci_high: f64,
    /// Largest `true − bound` seen; negative when no trial violated. Absent
    /// when no bound could be evaluated.
    pub worst_excess: Option<f64>,
    pub mean_bound: Option<f64>,
    /// Trials where every evaluated bound was vacuous (≥ 1 for zero-one risk).
    pub vacuous_trials: usize,
    /// Trials where the bound was not applicable for some hypothesis; those
    /// hypotheses cannot violate.
    pub inapplicable_trials: usize,
    pub complexity: ComplexityInput,
    /// `ci_low ≤ δ`: the data do not reject coverage at level δ.
    pub consistent_with_delta: bool,
    #[serde(skip)]
    pub rows: Vec<TrialRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidityReport {
    pub schema: String,
    /// `uniform-over-pool` or `single-trained-hypothesis`.
    pub event: String,
    pub seed: u64,
    pub version: String,
    pub trials: usize,
    pub config: ExperimentConfig,
    pub families: Vec<FamilyValidity>,
}

impl ValidityReport {
    pub fn family(&self, f: Family) -> Option<&FamilyValidity> {
        self.families.iter().find(|v| v.family == f)
    }

    pub fn csv_rows(&self, digits: usize) -> Vec<String> {
        let num = |x: f64| marginbound::numfmt::format_sig(x, digits);
        self.families
            .iter()
            .flat_map(|f| f.rows.iter())
            .map(|r| {
                format!(
                    "{},{},{},{},{},{},{}",
                    r.family,
                    r.trial,
                    num(r.emp),
                    num(r.complexity),
                    num(r.bound),
                    num(r.true_risk),
                    r.violated
                )
            })
            .collect()
    }
}

/// Exact binomial 95% interval for `k` successes in `n` trials.
pub fn clopper_pearson(k: usize, n: usize) -> (f64, f64) {
    assert!(n > 0 && k <= n);
    let (kf, nf) = (k as f64, n as f64);
    let lo = if k == 0 {
        0.0
    } else {
        Beta::new(kf, nf - kf + 1.0).expect("positive shapes").inverse_cdf(0.025)
    };
    let hi = if k == n {
        1.0
    } else {
        Beta::new(kf + 1.0, nf - kf).expect("positive shapes").inverse_cdf(0.975)
    };
    (lo, hi)
}

/// `pool_size` linear predictors in random directions with norm `norm_cap`.
pub fn random_linear_pool(dim: usize, pool_size: usize, norm_cap: f64, seed: u64) -> Result<Vec<Hypothesis>> {
    (0..pool_size)
        .map(|j| {
            let mut rng = substream(seed, &[KEY_POOL, j as u64]);
            let mut w: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(&mut rng)).collect();
            let n = marginbound::hypothesis::l2_norm(&w);
            if n == 0.0 {
                w[0] = 1.0;
            } else {
                w.iter_mut().for_each(|v| *v *= norm_cap / n);
            }
            Ok(Hypothesis::Linear(Linear::new(w, norm_cap)?))
        })
        .collect()
}

fn cover_mode(search: CoverSearch, pool: usize) -> CoverMode {
    match search {
        CoverSearch::Exact => CoverMode::Exact,
        CoverSearch::Greedy => CoverMode::Greedy,
        CoverSearch::Auto if pool <= EXACT_COVER_MAX_POOL => CoverMode::Exact,
        CoverSearch::Auto => CoverMode::Greedy,
    }
}

fn mode_method(mode: CoverMode) -> Method {
    match mode {
        CoverMode::Exact => Method::ExactEnumeration,
        CoverMode::Greedy => Method::GreedyUpper,
    }
}

/// `log 𝔼 𝒩_∞(·, eps, x_1^{2m})` averaged over fresh double samples; `matrix`
/// turns a double sample into the pool's value table.
fn expected_log_cover<F>(
    cfg: &ExperimentConfig,
    eps_list: &[f64],
    matrix: F,
    seed: u64,
) -> Result<(Vec<f64>, CoverMode)>
where
    F: Fn(&LabeledSample) -> Result<LossMatrix> + Sync,
{
    let mode = cover_mode(cfg.complexity.cover_search, cfg.class.pool_size);
    let m2 = 2 * cfg.params.m as usize;
    let counts: Vec<Vec<f64>> = (0..cfg.complexity.cover_trials)
        .into_par_iter()
        .map(|t| {
            let s = cfg.distribution.sample(m2, derive_seed(seed, &[KEY_COVER, t as u64]))?;
            let mat = matrix(&s)?;
            eps_list
                .iter()
                .map(|&e| Ok(covering_number_linf(&mat, e, mode)?.value))
                .collect()
        })
        .collect::<Result<_>>()?;
    let n = counts.len() as f64;
    let logs = (0..eps_list.len())
        .map(|i| (counts.iter().map(|c| c[i]).sum::<f64>() / n).ln())
        .collect();
    Ok((logs, mode))
}

/// Radius-`radius` linear class scaled by the pool's norm cap.
fn linear_class(dist: &SyntheticDistribution, cap: f64, rho: f64) -> FatDimParams {
    FatDimParams::Linear {
        radius: dist.radius() * cap,
        rho,
    }
}

/// Class-level complexity inputs shared by every trial.
struct Inputs {
    cov: Option<(f64, f64, CoverMode)>,
    fat_d: Option<f64>,
    rm: Option<(f64, Method, String)>,
    rmax: Option<f64>,
    loss_cover: BTreeMap<u64, f64>,
    loss_mode: Option<CoverMode>,
}

fn needs(cfg: &ExperimentConfig, fs: &[Family]) -> bool {
    cfg.families.iter().any(|f| fs.contains(f))
}

fn precompute(cfg: &ExperimentConfig, pool: &[Hypothesis]) -> Result<Inputs> {
    let p = &cfg.params;
    let rho = p.rho;
    let cov = if needs(cfg, &[Family::CovAlpha, Family::CovAlpha2, Family::CovUniformRho]) {
        let spec = TruncationSpec::new(rho)?;
        let truncated: Vec<Hypothesis> = pool.iter().map(|h| truncate(h, spec)).collect();
        let (logs, mode) = expected_log_cover(
            cfg,
            &[rho / 2.0, rho / 4.0],
            |s| LossMatrix::from_outputs(&truncated, s),
            derive_seed(cfg.seed, &[KEY_COVER, 0]),
        )?;
        Some((logs[0], logs[1], mode))
    } else {
        None
    };
    let fat_d = needs(cfg, &[Family::CovFat])
        .then(|| fat_dim_formula(&linear_class(&cfg.distribution, cfg.class.norm_cap, rho / 16.0)))
        .transpose()?
        // the fat-shattering route needs d ≥ 1; a smaller formula value only loosens the bound
        .map(|d| d.max(1.0));
    let rm = if needs(cfg, &[Family::Rad, Family::RadAllAlpha]) {
        let step = MarginTransform::step(rho)?;
        let m = p.m as usize;
        let est = peeling_complexity(
            |s| {
                let sample = cfg.distribution.sample(m, s)?;
                LossMatrix::from_margins(pool, &sample, |u| step.apply(u), RangeTag::Binary)
            },
            cfg.complexity.peeling_outer,
            cfg.complexity.n_sigma,
            derive_seed(cfg.seed, &[KEY_PEEL]),
        )?;
        let detail = format!(
            "peeling complexity, {} fresh samples, {}",
            cfg.complexity.peeling_outer,
            match est.inner_trials {
                Some(n) => format!("{n} sign vectors each"),
                None => "exact inner enumeration".to_string(),
            }
        );
        Some((est.value.max(0.0), est.method, detail))
    } else {
        None
    };
    let rmax = needs(cfg, &[Family::RadSmooth])
        .then(|| worst_case_rademacher(&linear_class(&cfg.distribution, cfg.class.norm_cap, rho), p.m as f64))
        .transpose()?;
    let mut loss_cover = BTreeMap::new();
    let mut loss_mode = None;
    if needs(cfg, &[Family::Unbounded, Family::UnboundedUniformRho]) {
        let mut radii = vec![rho / 2.0];
        if cfg.families.contains(&Family::UnboundedUniformRho) {
            radii.extend(cfg.unbounded.rho_grid.iter().map(|r| r / 2.0));
        }
        radii.sort_by(f64::total_cmp);
        radii.dedup();
        let loss = cfg.unbounded.loss;
        let (logs, mode) = expected_log_cover(
            cfg,
            &radii,
            |s| loss_matrix(pool, loss, s),
            derive_seed(cfg.seed, &[KEY_COVER, 1]),
        )?;
        loss_mode = Some(mode);
        for (r, l) in radii.iter().zip(logs) {
            loss_cover.insert(r.to_bits(), l);
        }
    }
    Ok(Inputs {
        cov,
        fat_d,
        rm,
        rmax,
        loss_cover,
        loss_mode,
    })
}

fn loss_matrix(pool: &[Hypothesis], loss: UnboundedLoss, s: &LabeledSample) -> Result<LossMatrix> {
    let cols = pool.iter().map(|h| losses(h, loss, s)).collect::<Result<Vec<_>>>()?;
    LossMatrix::from_columns(cols, RangeTag::Real)
}

fn complexity_input(f: Family, inp: &Inputs, cfg: &ExperimentConfig) -> ComplexityInput {
    let cover_detail = |what: &str, eps: &str, mode: CoverMode| {
        format!(
            "log of the mean {} ℓ∞ cover of {what} at {eps} over {} double samples",
            match mode {
                CoverMode::Exact => "exact",
                CoverMode::Greedy => "greedy",
            },
            cfg.complexity.cover_trials
        )
    };
    match f {
        Family::CovAlpha | Family::CovAlpha2 | Family::CovUniformRho => {
            let (half, quarter, mode) = inp.cov.expect("precomputed");
            let (value, eps) = if f == Family::CovUniformRho {
                (quarter, "rho/4")
            } else {
                (half, "rho/2")
            };
            ComplexityInput {
                value,
                method: mode_method(mode),
                detail: cover_detail("the truncated pool", eps, mode),
            }
        }
        Family::CovFat => ComplexityInput {
            value: inp.fat_d.expect("precomputed"),
            method: Method::Formula,
            detail: "fat-shattering dimension of the norm-capped linear class at rho/16".into(),
        },
        Family::Rad | Family::RadAllAlpha => {
            let (v, m, d) = inp.rm.clone().expect("precomputed");
            ComplexityInput {
                value: v,
                method: m,
                detail: d,
            }
        }
        Family::RadSmooth => ComplexityInput {
            value: inp.rmax.expect("precomputed"),
            method: Method::Formula,
            detail: "worst-case Rademacher complexity of the norm-capped linear class".into(),
        },
        Family::Unbounded | Family::UnboundedUniformRho => {
            let mode = inp.loss_mode.expect("precomputed");
            ComplexityInput {
                value: inp.loss_cover[&(cfg.params.rho / 2.0).to_bits()],
                method: mode_method(mode),
                detail: cover_detail("the loss class", "rho/2", mode),
            }
        }
    }
}

/// Per-hypothesis data a bound evaluation needs.
struct Member<'a> {
    margins: &'a [f64],
    /// Unbounded families: empirical loss and holdout α-moment.
    emp_loss: f64,
    moment: f64,
}

fn margin_loss(margins: &[f64], rho: f64) -> Result<f64> {
    let t = MarginTransform::step(rho)?;
    Ok(margins.iter().map(|&u| t.apply(u)).sum::<f64>() / margins.len() as f64)
}

fn evaluate(f: Family, mem: &Member<'_>, inp: &Inputs, cfg: &ExperimentConfig) -> Result<BoundReport> {
    let p = &cfg.params;
    let emp = || margin_loss(mem.margins, p.rho);
    let cover = |r: f64| {
        inp.loss_cover
            .get(&r.to_bits())
            .copied()
            .ok_or_else(|| Error::Input(format!("no loss cover precomputed at radius {r}")))
    };
    match f {
        Family::CovAlpha => bound_cov_alpha(emp()?, inp.cov.expect("precomputed").0, p),
        Family::CovAlpha2 => bound_cov_alpha2(emp()?, inp.cov.expect("precomputed").0, p),
        Family::CovUniformRho => {
            let quarter = inp.cov.expect("precomputed").1;
            bound_cov_uniform_rho(
                |r| margin_loss(mem.margins, r),
                |eps| {
                    if eps == p.rho / 4.0 {
                        Ok(quarter)
                    } else {
                        Err(Error::Input(format!("no cover precomputed at radius {eps}")))
                    }
                },
                p,
            )
        }
        Family::CovFat => bound_cov_fat(emp()?, inp.fat_d.expect("precomputed"), p),
        Family::Rad => bound_rad(emp()?, inp.rm.as_ref().expect("precomputed").0, p),
        Family::RadAllAlpha => bound_rad_all_alpha(
            emp()?,
            inp.rm.as_ref().expect("precomputed").0,
            &cfg.complexity.alpha_grid,
            p,
        ),
        // the step loss dominates every smoothed margin loss, so using it keeps the bound valid
        Family::RadSmooth => bound_rad_smooth(emp()?, inp.rmax.expect("precomputed"), p),
        Family::Unbounded => bound_unbounded(mem.emp_loss, mem.moment, cover(p.rho / 2.0)?, p),
        Family::UnboundedUniformRho => {
            bound_unbounded_uniform_rho(mem.emp_loss, mem.moment, cover, &cfg.unbounded.rho_grid, p)
        }
    }
}

/// One family's outcome in one trial.
struct Outcome {
    row: Option<TrialRow>,
    violated: bool,
    vacuous: bool,
    inapplicable: bool,
}

fn judge(f: Family, trial: usize, evals: Vec<(Result<BoundReport>, f64)>) -> Result<Outcome> {
    let mut row: Option<TrialRow> = None;
    let mut inapplicable = false;
    let mut all_vacuous = true;
    for (rep, truth) in evals {
        let rep = match rep {
            Ok(r) => r,
            Err(Error::Applicability(_) | Error::Domain(_)) => {
                inapplicable = true;
                continue;
            }
            Err(e) => return Err(e),
        };
        all_vacuous &= rep.vacuous;
        let excess = truth - rep.bound_value;
        if row.as_ref().is_none_or(|r| excess > r.true_risk - r.bound) {
            row = Some(TrialRow {
                family: f,
                trial,
                emp: rep.empirical_term,
                complexity: rep.complexity_term,
                bound: rep.bound_value,
                true_risk: truth,
                violated: excess > 0.0,
            });
        }
    }
    Ok(Outcome {
        violated: row.as_ref().is_some_and(|r| r.violated),
        vacuous: row.is_some() && all_vacuous,
        inapplicable,
        row,
    })
}

fn summarize(f: Family, trials: usize, outcomes: Vec<Outcome>, complexity: ComplexityInput, delta: f64) -> FamilyValidity {
    let violations = outcomes.iter().filter(|o| o.violated).count();
    let rows: Vec<TrialRow> = outcomes.iter().filter_map(|o| o.row.clone()).collect();
    let (ci_low, ci_high) = clopper_pearson(violations, trials);
    let worst_excess = rows.iter().map(|r| r.true_risk - r.bound).reduce(f64::max);
    let mean_bound = (!rows.is_empty()).then(|| rows.iter().map(|r| r.bound).sum::<f64>() / rows.len() as f64);
    FamilyValidity {
        family: f,
        trials,
        violations,
        violation_rate: violations as f64 / trials as f64,
        ci_low,
        ci_high,
        worst_excess,
        mean_bound,
        vacuous_trials: outcomes.iter().filter(|o| o.vacuous).count(),
        inapplicable_trials: outcomes.iter().filter(|o| o.inapplicable).count(),
        complexity,
        consistent_with_delta: ci_low <= delta,
        rows,
    }
}

fn risk_mode(dist: &SyntheticDistribution, n: usize, seed: u64) -> RiskMode {
    if dist.analytic_risk_available() {
        RiskMode::Analytic
    } else {
        RiskMode::Holdout { n, seed }
    }
}

/// Run a coverage campaign.
pub fn validate_bounds(cfg: &ExperimentConfig) -> Result<ValidityReport> {
    cfg.validate()?;
    let m = cfg.params.m as usize;
    if m == 0 {
        return Err(Error::Input("params.m must be at least 1".into()));
    }
    let families = match cfg.mode {
        ValidationMode::Pool => run_pool(cfg, m)?,
        ValidationMode::Trained => run_trained(cfg, m)?,
    };
    Ok(ValidityReport {
        schema: VALIDITY_SCHEMA.to_string(),
        event: match cfg.mode {
            ValidationMode::Pool => "uniform-over-pool",
            ValidationMode::Trained => "single-trained-hypothesis",
        }
        .to_string(),
        seed: cfg.seed,
        version: env!("CARGO_PKG_VERSION").to_string(),
        trials: cfg.trials,
        config: cfg.clone(),
        families,
    })
}

fn run_pool(cfg: &ExperimentConfig, m: usize) -> Result<Vec<FamilyValidity>> {
    let dist = &cfg.distribution;
    let pool = random_linear_pool(dist.dim(), cfg.class.pool_size, cfg.class.norm_cap, cfg.seed)?;
    let inputs = precompute(cfg, &pool)?;
    let zero_one = cfg.families.iter().any(|f| f.is_zero_one());
    let unbounded = cfg.families.iter().any(|f| !f.is_zero_one());

    let truth01: Vec<f64> = if zero_one {
        pool.iter()
            .enumerate()
            .map(|(j, h)| {
                let mode = risk_mode(dist, cfg.complexity.holdout, derive_seed(cfg.seed, &[KEY_HOLDOUT, j as u64]));
                Ok(dist.true_risk(h, mode)?.value)
            })
            .collect::<Result<_>>()?
    } else {
        Vec::new()
    };
    // true loss and α-moment of each member from one shared holdout
    let (truth_loss, moments): (Vec<f64>, Vec<f64>) = if unbounded {
        let hold = dist.sample(cfg.complexity.holdout, derive_seed(cfg.seed, &[KEY_HOLDOUT]))?;
        pool.par_iter()
            .map(|h| {
                let ls = losses(h, cfg.unbounded.loss, &hold)?;
                let mean = ls.iter().sum::<f64>() / ls.len() as f64;
                Ok((mean, moment_of(&ls, cfg.params.alpha)?))
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .unzip()
    } else {
        (Vec::new(), Vec::new())
    };

    let per_trial: Vec<Vec<Outcome>> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let s = dist.sample(m, derive_seed(cfg.seed, &[KEY_TRIAL, t as u64]))?;
            let margins: Vec<Vec<f64>> = pool.iter().map(|h| h.margins(&s)).collect::<Result<_>>()?;
            let emp_loss: Vec<f64> = if unbounded {
                pool.iter()
                    .map(|h| Ok(losses(h, cfg.unbounded.loss, &s)?.iter().sum::<f64>() / m as f64))
                    .collect::<Result<_>>()?
            } else {
                Vec::new()
            };
            cfg.families
                .iter()
                .map(|&f| {
                    let evals = (0..pool.len())
                        .map(|j| {
                            let mem = Member {
                                margins: &margins[j],
                                emp_loss: emp_loss.get(j).copied().unwrap_or(0.0),
                                moment: moments.get(j).copied().unwrap_or(0.0),
                            };
                            let truth = if f.is_zero_one() { truth01[j] } else { truth_loss[j] };
                            (evaluate(f, &mem, &inputs, cfg), truth)
                        })
                        .collect();
                    judge(f, t, evals)
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    Ok(collect_families(cfg, per_trial, &inputs))
}

fn collect_families(cfg: &ExperimentConfig, per_trial: Vec<Vec<Outcome>>, inputs: &Inputs) -> Vec<FamilyValidity> {
    let mut by_family: Vec<Vec<Outcome>> = cfg.families.iter().map(|_| Vec::with_capacity(cfg.trials)).collect();
    for trial in per_trial {
        for (i, o) in trial.into_iter().enumerate() {
            by_family[i].push(o);
        }
    }
    cfg.families
        .iter()
        .zip(by_family)
        .map(|(&f, outs)| summarize(f, cfg.trials, outs, complexity_input(f, inputs, cfg), cfg.params.delta))
        .collect()
}

fn run_trained(cfg: &ExperimentConfig, m: usize) -> Result<Vec<FamilyValidity>> {
    let dist = &cfg.distribution;
    let trainer = cfg.trainer.as_ref().expect("validated");
    if let TrainerSpec::HingeSubgradientLinear { norm_cap, .. } = trainer {
        if *norm_cap > cfg.class.norm_cap {
            return Err(Error::Input(format!(
                "trainer norm_cap {norm_cap} exceeds class.norm_cap {}",
                cfg.class.norm_cap
            )));
        }
    }
    let inputs = precompute(cfg, &[])?;
    let per_trial: Vec<Vec<Outcome>> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let ts = derive_seed(cfg.seed, &[KEY_TRIAL, t as u64]);
            let s = dist.sample(m, ts)?;
            let h = train(trainer, &s, derive_seed(ts, &[1]))?;
            let margins = h.margins(&s)?;
            let truth = dist
                .true_risk(&h, risk_mode(dist, cfg.complexity.holdout, derive_seed(ts, &[KEY_HOLDOUT])))?
                .value;
            let mem = Member {
                margins: &margins,
                emp_loss: 0.0,
                moment: 0.0,
            };
            cfg.families
                .iter()
                .map(|&f| judge(f, t, vec![(evaluate(f, &mem, &inputs, cfg), truth)]))
                .collect()
        })
        .collect::<Result<_>>()?;
    Ok(collect_families(cfg, per_trial, &inputs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clopper_pearson_edges() {
        assert_eq!(clopper_pearson(0, 10).0, 0.0);
        assert_eq!(clopper_pearson(10, 10).1, 1.0);
        // k = 0: upper end solves (1 − p)^n = 0.025
        let (_, hi) = clopper_pearson(0, 100);
        assert!((hi - (1.0 - 0.025f64.powf(0.01))).abs() < 1e-10);
        let (lo, hi) = clopper_pearson(5, 100);
        assert!(lo < 0.05 && 0.05 < hi);
    }

    #[test]
    fn pool_is_norm_capped() {
        let pool = random_linear_pool(3, 20, 2.0, 1).unwrap();
        for h in &pool {
            let Hypothesis::Linear(l) = h else { panic!() };
            assert!((marginbound::hypothesis::l2_norm(l.weights()) - 2.0).abs() < 1e-12);
        }
    }
}
