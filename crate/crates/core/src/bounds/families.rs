use std::f64::consts::SQRT_2;

use super::report::{BoundParams, BoundReport, Family, Solver};
use super::solve::{explicit_lemma_d1, gamma_factor, solve_relative};
use crate::complexity::{cover_log_bound_from_fat, rm_upper_smooth, FAT_COVER_CONSTANT};
use crate::error::{Error, Result};

fn check_emp(emp: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&emp) {
        return Err(Error::input(format!("empirical margin loss must lie in [0, 1], got {emp}")));
    }
    Ok(())
}

fn check_nonneg(name: &str, v: f64) -> Result<()> {
    if !(v >= 0.0 && v.is_finite()) {
        return Err(Error::input(format!("{name} must be finite and nonnegative, got {v}")));
    }
    Ok(())
}

fn check_params(p: &BoundParams) -> Result<()> {
    p.validate()
}

/// Exponent of m in the covering-number bounds, 2(α−1)/α.
pub fn m_exponent(alpha: f64) -> f64 {
    2.0 * (alpha - 1.0) / alpha
}

/// √((logN + log(1/δ) + extra) / m^{2(α−1)/α}).
fn cover_deviation(log_n: f64, extra: f64, p: &BoundParams) -> f64 {
    ((log_n + p.log_inv_delta() + extra) / p.mf().powf(m_exponent(p.alpha))).sqrt()
}

/// Shared solver for the covering-number bound with an optional extra
/// confidence addend. With τ > 0 the inequality is R ≤ emp + C·(R+τ)^{1/α}.
fn cov_alpha_report(family: Family, emp: f64, log_n: f64, extra: f64, p: &BoundParams) -> BoundReport {
    let a = p.alpha;
    let dev = cover_deviation(log_n, extra, p);
    let coef = 2f64.powf((a + 2.0) / (2.0 * a)) * dev;
    let shift = emp + p.tau;
    let value = solve_relative(shift, coef, a) - p.tau;
    let d1 = explicit_lemma_d1(shift, coef, a) - p.tau;
    BoundReport::new(family, *p, emp, log_n, value.max(emp), Solver::RootFind)
        .input("emp", emp)
        .term("log_inv_delta", p.log_inv_delta())
        .term("m_exponent", m_exponent(a))
        .term("epsilon", dev)
        .term("coefficient", coef)
        .term("deviation", value.max(emp) - emp)
        .alternate("lemma-D1", d1, Solver::LemmaD1)
}

/// R ≤ R̂^ρ + 2^{(α+2)/(2α)}·R^{1/α}·√((logN + log(1/δ))/m^{2(α−1)/α}), with
/// logN the log expected ℓ∞ cover of the margin class at radius ρ/2 on 2m
/// points, resolved at its largest fixed point.
pub fn bound_cov_alpha(emp: f64, log_n: f64, p: &BoundParams) -> Result<BoundReport> {
    check_params(p)?;
    check_emp(emp)?;
    check_nonneg("logN", log_n)?;
    Ok(cov_alpha_report(Family::CovAlpha, emp, log_n, 0.0, p).input("log_n", log_n))
}

/// α = 2 closed form: emp + 2√(emp·c) + 4c with c = (logN + log(1/δ))/m.
pub fn bound_cov_alpha2(emp: f64, log_n: f64, p: &BoundParams) -> Result<BoundReport> {
    check_params(p)?;
    if p.alpha != 2.0 {
        return Err(Error::input(format!("this bound is stated for alpha = 2, got {}", p.alpha)));
    }
    check_emp(emp)?;
    check_nonneg("logN", log_n)?;
    let c = (log_n + p.log_inv_delta()) / p.mf();
    let value = emp + 2.0 * (emp * c).sqrt() + 4.0 * c;
    let implicit = solve_relative(emp, 2.0 * c.sqrt(), 2.0);
    Ok(BoundReport::new(Family::CovAlpha2, *p, emp, log_n, value, Solver::ClosedForm)
        .input("emp", emp)
        .input("log_n", log_n)
        .term("log_inv_delta", p.log_inv_delta())
        .term("c", c)
        .term("cross_term", 2.0 * (emp * c).sqrt())
        .term("linear_term", 4.0 * c)
        .alternate("implicit", implicit, Solver::RootFind))
}

/// Fat-shattering form: with term = (1 + d log₂(2c²m) log₂(2cem/d) + log(1/δ))/m
/// and c = 17, the bound is emp + 2√(emp·term) + term. `d` is the
/// fat-shattering dimension at scale ρ/16.
pub fn bound_cov_fat(emp: f64, d: f64, p: &BoundParams) -> Result<BoundReport> {
    check_params(p)?;
    check_emp(emp)?;
    if !(d >= 1.0 && d.is_finite()) {
        return Err(Error::input(format!("fat-shattering dimension must be ≥ 1, got {d}")));
    }
    let log_cover = cover_log_bound_from_fat(d, p.mf(), FAT_COVER_CONSTANT)?;
    let term = (log_cover + p.log_inv_delta()) / p.mf();
    let value = emp + 2.0 * (emp * term).sqrt() + term;
    Ok(BoundReport::new(Family::CovFat, *p, emp, log_cover, value, Solver::ClosedForm)
        .input("emp", emp)
        .input("fat_dim", d)
        .term("log_inv_delta", p.log_inv_delta())
        .term("term", term)
        .term("cross_term", 2.0 * (emp * term).sqrt()))
}

/// The `log log₂(2r/ρ)` price of holding uniformly over ρ ∈ (0, r].
pub fn uniform_rho_addend(rho: f64, r: f64) -> Result<f64> {
    if !(rho > 0.0 && rho <= r) {
        return Err(Error::input(format!("rho must lie in (0, r] = (0, {r}], got {rho}")));
    }
    Ok((2.0 * r / rho).log2().ln())
}

/// Covering-number bound holding for all ρ ∈ (0, r] at once, evaluated at
/// `p.rho`. `emp_at` gives the empirical margin loss at a margin and
/// `log_cover_at` the log expected cover at a radius; the latter is queried
/// at ρ/4.
pub fn bound_cov_uniform_rho<E, N>(emp_at: E, log_cover_at: N, p: &BoundParams) -> Result<BoundReport>
where
    E: Fn(f64) -> Result<f64>,
    N: Fn(f64) -> Result<f64>,
{
    check_params(p)?;
    let addend = uniform_rho_addend(p.rho, p.r)?;
    let emp = emp_at(p.rho)?;
    check_emp(emp)?;
    let log_n = log_cover_at(p.rho / 4.0)?;
    check_nonneg("logN", log_n)?;
    Ok(cov_alpha_report(Family::CovUniformRho, emp, log_n, addend, p)
        .input("log_n", log_n)
        .term("log_log_addend", addend))
}

/// (𝔯 + log log m + log(16/δ))/m; needs m ≥ 3 so that log log m is defined
/// and nonnegative.
pub fn peeling_b(rm: f64, p: &BoundParams) -> Result<f64> {
    if p.m < 3 {
        return Err(Error::input(format!("peeling bounds need m ≥ 3, got {}", p.m)));
    }
    check_nonneg("peeling complexity", rm)?;
    Ok((rm + confidence_part(p)) / p.mf())
}

fn confidence_part(p: &BoundParams) -> f64 {
    p.mf().ln().ln() + (16.0 / p.delta).ln()
}

/// emp + K·emp^{1/α}·B^{1−1/α} + 2·32^{α/(α−1)}·B.
fn explicit_rad(emp: f64, b: f64, alpha: f64, k: f64) -> f64 {
    emp + k * emp.powf(1.0 / alpha) * b.powf(1.0 - 1.0 / alpha) + 2.0 * 32f64.powf(alpha / (alpha - 1.0)) * b
}

/// Peeling-based bound R − R̂^ρ ≤ 32·(R̂^ρ)^{1/α}·B^{1−1/α} + 2·32^{α/(α−1)}·B.
/// The implicit form with coefficient 16√2·R^{1/α}·B^{1−1/α} is solved and
/// reported as an alternate.
pub fn bound_rad(emp: f64, rm: f64, p: &BoundParams) -> Result<BoundReport> {
    check_params(p)?;
    check_emp(emp)?;
    let b = peeling_b(rm, p)?;
    let a = p.alpha;
    let value = explicit_rad(emp, b, a, 32.0);
    let coef = 16.0 * SQRT_2 * b.powf(1.0 - 1.0 / a);
    Ok(BoundReport::new(Family::Rad, *p, emp, rm, value, Solver::ClosedForm)
        .input("emp", emp)
        .input("rm", rm)
        .term("log_log_m", p.mf().ln().ln())
        .term("log_16_over_delta", (16.0 / p.delta).ln())
        .term("B", b)
        .term("cross_term", 32.0 * emp.powf(1.0 / a) * b.powf(1.0 - 1.0 / a))
        .term("linear_term", 2.0 * 32f64.powf(a / (a - 1.0)) * b)
        .alternate("implicit", solve_relative(emp, coef, a), Solver::RootFind)
        .alternate("implicit-lemma-D1", explicit_lemma_d1(emp, coef, a), Solver::LemmaD1))
}

/// Bound holding for all α ∈ (1, 2] at once: the implicit inequality with
/// coefficient 32√2·B^{1−1/α} is solved for each α of `alphas` and the
/// smallest value is returned. The report's α is the minimizer.
pub fn bound_rad_all_alpha(emp: f64, rm: f64, alphas: &[f64], p: &BoundParams) -> Result<BoundReport> {
    if alphas.is_empty() {
        return Err(Error::input("alpha grid is empty"));
    }
    check_emp(emp)?;
    let mut best: Option<(f64, f64)> = None;
    let mut per_alpha = Vec::with_capacity(alphas.len());
    for &a in alphas {
        let pa = p.with_alpha(a)?;
        let b = peeling_b(rm, &pa)?;
        let coef = 32.0 * SQRT_2 * b.powf(1.0 - 1.0 / a);
        let v = solve_relative(emp, coef, a);
        per_alpha.push((a, coef, v));
        if best.is_none_or(|(_, bv)| v < bv) {
            best = Some((a, v));
        }
    }
    let (a_star, value) = best.expect("grid is nonempty");
    let pa = p.with_alpha(a_star)?;
    let b = peeling_b(rm, &pa)?;
    let mut report = BoundReport::new(Family::RadAllAlpha, pa, emp, rm, value, Solver::RootFind)
        .input("emp", emp)
        .input("rm", rm)
        .term("B", b)
        .term("alpha_star", a_star);
    for (a, coef, v) in per_alpha {
        report = report
            .term(&format!("coefficient[alpha={a}]"), coef)
            .alternate(format!("alpha={a}"), v, Solver::RootFind);
    }
    Ok(report)
}

/// Smoothed-margin bound: β = (16π²/ρ²)(R̂^max)²[2 log^{3/2}(m/R̂^max) −
/// log^{3/2}(2πm/(ρR̂^max))]² + (log log m + log(16/δ))/m, and the bound is
/// emp + 32√2·emp^{1/α}·β^{1−1/α} + 2·32^{α/(α−1)}·β.
pub fn bound_rad_smooth(emp: f64, rmax: f64, p: &BoundParams) -> Result<BoundReport> {
    check_params(p)?;
    check_emp(emp)?;
    if p.m < 3 {
        return Err(Error::input(format!("peeling bounds need m ≥ 3, got {}", p.m)));
    }
    let rm = rm_upper_smooth(p.rho, p.mf(), rmax)?;
    let complexity = rm / p.mf();
    let confidence = confidence_part(p) / p.mf();
    let beta = complexity + confidence;
    let a = p.alpha;
    let value = explicit_rad(emp, beta, a, 32.0 * SQRT_2);
    Ok(BoundReport::new(Family::RadSmooth, *p, emp, rm, value, Solver::ClosedForm)
        .input("emp", emp)
        .input("rmax", rmax)
        .term("beta_complexity", complexity)
        .term("beta_confidence", confidence)
        .term("beta", beta)
        .term("cross_term", 32.0 * SQRT_2 * emp.powf(1.0 / a) * beta.powf(1.0 - 1.0 / a))
        .term("linear_term", 2.0 * 32f64.powf(a / (a - 1.0)) * beta))
}

fn unbounded_report(
    family: Family,
    emp_loss: f64,
    moment: f64,
    log_n: f64,
    extra: f64,
    p: &BoundParams,
) -> Result<BoundReport> {
    let eps = cover_deviation(log_n, extra, p);
    if eps > 1.0 {
        return Err(Error::Applicability(format!(
            "deviation scale {eps} exceeds 1 at rho={}; the bound is vacuous here",
            p.rho
        )));
    }
    let root = moment.powf(1.0 / p.alpha);
    let mut report;
    if eps == 0.0 {
        report = BoundReport::new(family, *p, emp_loss, log_n, emp_loss + p.rho, Solver::ClosedForm)
            .term("epsilon", 0.0)
            .term("deviation", 0.0);
    } else {
        let gamma = gamma_factor(p.alpha, eps, 0.0)?;
        let dev = gamma * root * eps;
        report = BoundReport::new(family, *p, emp_loss, log_n, emp_loss + dev + p.rho, Solver::ClosedForm)
            .term("epsilon", eps)
            .term("gamma", gamma)
            .term("deviation", dev);
    }
    report = report
        .input("emp_loss", emp_loss)
        .input("moment", moment)
        .input("log_n", log_n)
        .term("moment_root", root)
        .term("rho", p.rho);
    Ok(report)
}

fn check_unbounded_inputs(emp_loss: f64, moment: f64) -> Result<()> {
    check_nonneg("empirical loss", emp_loss)?;
    check_nonneg("loss moment", moment)
}

/// Unbounded-loss bound 𝓛 ≤ L̂ + Γ₀(α, ε̂)·𝓛_α^{1/α}·ε̂ + ρ with
/// ε̂ = √((logN + log(1/δ))/m^{2(α−1)/α}) and logN the log cover of the loss
/// class at radius ρ/2. Γ₀ is evaluated once at ε̂. ε̂ = 0 gives L̂ + ρ.
pub fn bound_unbounded(emp_loss: f64, moment: f64, log_n: f64, p: &BoundParams) -> Result<BoundReport> {
    check_params(p)?;
    check_unbounded_inputs(emp_loss, moment)?;
    check_nonneg("logN", log_n)?;
    unbounded_report(Family::Unbounded, emp_loss, moment, log_n, 0.0, p)
}

/// Minimum over a ρ grid in (0, r] of the unbounded-loss bound with the
/// log log₂(2r/ρ) addend. `log_cover_at` is queried at radius ρ/2. Grid
/// points where the bound is inapplicable are skipped; if none remain the
/// applicability error of the last one is returned.
pub fn bound_unbounded_uniform_rho<N>(
    emp_loss: f64,
    moment: f64,
    log_cover_at: N,
    rhos: &[f64],
    p: &BoundParams,
) -> Result<BoundReport>
where
    N: Fn(f64) -> Result<f64>,
{
    check_params(p)?;
    check_unbounded_inputs(emp_loss, moment)?;
    if rhos.is_empty() {
        return Err(Error::input("rho grid is empty"));
    }
    let mut best: Option<BoundReport> = None;
    let mut per_rho = Vec::with_capacity(rhos.len());
    let mut last_err = None;
    for &rho in rhos {
        let addend = uniform_rho_addend(rho, p.r)?;
        let pr = p.with_rho(rho)?;
        let log_n = log_cover_at(rho / 2.0)?;
        check_nonneg("logN", log_n)?;
        match unbounded_report(Family::UnboundedUniformRho, emp_loss, moment, log_n, addend, &pr) {
            Ok(r) => {
                let r = r.term("log_log_addend", addend);
                per_rho.push((rho, r.bound_value));
                if best.as_ref().is_none_or(|b| r.bound_value < b.bound_value) {
                    best = Some(r);
                }
            }
            Err(e @ Error::Applicability(_)) => last_err = Some(e),
            Err(e) => return Err(e),
        }
    }
    let Some(mut report) = best else {
        return Err(last_err.expect("grid is nonempty"));
    };
    let rho_star = report.params.rho;
    report = report.term("rho_star", rho_star);
    for (rho, v) in per_rho {
        report = report.alternate(format!("rho={rho}"), v, Solver::ClosedForm);
    }
    Ok(report)
}
