//! Acceptance criteria for the library, harness and CLI.
//!
//! Runs as a plain binary (`harness = false`) so every criterion prints one
//! PASS/FAIL line even under `cargo test`. A criterion fails when its check
//! fails or when it overruns its wall-clock budget. Exit status is nonzero if
//! any criterion fails.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use marginbound::bounds::{bound_cov_alpha2, explicit_lemma_d1, gamma_factor, solve_relative, BoundParams, Family};
use marginbound::complexity::{
    covering_number_linf, peeling_complexity, rademacher_exact, rademacher_mc, rm_upper_dichotomy, CoverMode,
    LossMatrix, RangeTag, FAT_COVER_CONSTANT,
};
use marginbound::distribution::SyntheticDistribution;
use marginbound::hypothesis::l2_norm;
use marginbound::rng::substream;
use marginbound_harness::boundmin::{train_bound_min, BoundMinSettings};
use marginbound_harness::lemmas::{verify_binomial_lemma, verify_monotone_ratio};
use marginbound_harness::tightness::{compare_tightness, new_form, old_form, TightnessConfig};
use marginbound_harness::{validate_bounds, ExperimentConfig};
use rand::Rng;
use rand_distr::StandardNormal;

type Check = fn() -> Result<String, String>;

// Pinned tolerances.
const SOLVER_RESIDUAL_REL: f64 = 1e-10;
const MC_STDERRS: f64 = 3.0;
const PEELING_MATCH_REL: f64 = 1e-12;
const NORM_SLACK: f64 = 1e-9;

fn repo_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn c1_formula_fidelity() -> Result<String, String> {
    let g = gamma_factor(2.0, 1.0, 0.0).map_err(err)?;
    ensure(g == 1.5, || format!("gamma_factor(2, 1, 0) = {g}, want 1.5"))?;
    let d1 = explicit_lemma_d1(1.0, 1.0, 2.0);
    ensure(d1 == 7.0, || format!("explicit_lemma_d1(1, 1, 2) = {d1}, want 7"))?;
    // c = (logN + log 1/δ)/m = (10 + 0)/1000 = 0.01
    let p = BoundParams::new(2.0, 1.0, 1.0, 1000).map_err(err)?;
    let r = bound_cov_alpha2(0.0, 10.0, &p).map_err(err)?;
    ensure(r.bound_value == 0.04, || format!("cov-alpha2 at emp 0, c 0.01 = {}, want 0.04", r.bound_value))?;
    ensure(FAT_COVER_CONSTANT == 17.0, || format!("fat cover constant is {FAT_COVER_CONSTANT}"))?;
    let src = std::fs::read_to_string(repo_root().join("crates/core/src/complexity/formulas.rs")).map_err(err)?;
    ensure(src.contains("pub const FAT_COVER_CONSTANT: f64 = 17.0;"), || {
        "constant declaration not found in formulas.rs".into()
    })?;
    let fam = std::fs::read_to_string(repo_root().join("crates/core/src/bounds/families.rs")).map_err(err)?;
    ensure(fam.contains("FAT_COVER_CONSTANT)"), || "cov-fat does not pass the shared constant".into())?;
    Ok("Γ(2,1,0)=1.5, D.1(1,1,2)=7, cov-alpha2=0.04, c=17".into())
}

fn c2_solver_soundness() -> Result<String, String> {
    let mut rng = substream(2, &[0]);
    let mut worst: f64 = 0.0;
    let mut min_slack = f64::INFINITY;
    for i in 0..10_000 {
        let b = if i % 50 == 0 { 0.0 } else { 10f64.powf(rng.random_range(-6.0..1.0)) };
        let c = if i % 97 == 0 { 0.0 } else { 10f64.powf(rng.random_range(-6.0..1.0)) };
        let alpha: f64 = rng.random_range(1.01..=2.0);
        let x = solve_relative(b, c, alpha);
        let resid = (b + c * x.powf(1.0 / alpha) - x).abs() / x.max(f64::MIN_POSITIVE);
        worst = worst.max(resid);
        ensure(resid <= SOLVER_RESIDUAL_REL, || {
            format!("residual {resid:e} at b={b}, C={c}, α={alpha}")
        })?;
        let d1 = explicit_lemma_d1(b, c, alpha);
        ensure(d1 >= x, || format!("D.1 value {d1} below root {x} at b={b}, C={c}, α={alpha}"))?;
        if x > 0.0 {
            min_slack = min_slack.min(d1 / x);
        }
    }
    Ok(format!("10⁴ cases, worst relative residual {worst:.1e}, min D.1/root {min_slack:.6}"))
}

fn random_binary(rng: &mut impl Rng, rows: usize, cols: usize) -> LossMatrix {
    let p: f64 = rng.random_range(0.1..0.9);
    let c = (0..cols)
        .map(|_| (0..rows).map(|_| f64::from(u8::from(rng.random::<f64>() < p))).collect())
        .collect();
    LossMatrix::from_columns(c, RangeTag::Binary).expect("valid matrix")
}

/// `𝔼_σ sup_g (1/m) Σ σ_i g_i` by plain enumeration of all sign vectors.
fn brute_rademacher(cols: &[Vec<f64>], m: usize) -> f64 {
    if cols.is_empty() {
        return 0.0;
    }
    let mut total = 0.0;
    for mask in 0u32..1 << m {
        let best = cols
            .iter()
            .map(|g| {
                (0..m)
                    .map(|i| if mask >> i & 1 == 1 { g[i] } else { -g[i] })
                    .sum::<f64>()
            })
            .fold(f64::NEG_INFINITY, f64::max);
        total += best / m as f64;
    }
    total / f64::from(1u32 << m)
}

/// `sup_k m² R̂(𝒢_k)² / 2^{k+5}` with `𝒢_k = {g : 2^k ≤ Σ g + 1 < 2^{k+1}}`.
fn brute_peeling(mat: &LossMatrix) -> f64 {
    let m = mat.rows();
    let mut buckets: BTreeMap<u32, Vec<Vec<f64>>> = BTreeMap::new();
    for c in mat.columns() {
        let s = c.iter().sum::<f64>() as u64 + 1;
        buckets.entry(63 - s.leading_zeros()).or_default().push(c.to_vec());
    }
    buckets
        .iter()
        .map(|(&k, cols)| {
            let r = brute_rademacher(cols, m);
            (m * m) as f64 * r * r / 2f64.powi(k as i32 + 5)
        })
        .fold(0.0, f64::max)
}

fn c3_estimator_vs_oracle() -> Result<String, String> {
    let mut rng = substream(3, &[0]);
    let mut worst_z: f64 = 0.0;
    for t in 0..100u64 {
        let rows = rng.random_range(2..=12);
        let cols = rng.random_range(1..=30);
        let mat = random_binary(&mut rng, rows, cols);
        let exact = rademacher_exact(&mat).map_err(err)?.value;
        let mc = rademacher_mc(&mat, 2000, 100 + t).map_err(err)?;
        let se = mc.stderr.unwrap_or(0.0);
        let gap = (mc.value - exact).abs();
        if se > 0.0 {
            worst_z = worst_z.max(gap / se);
        }
        ensure(gap <= MC_STDERRS * se, || {
            format!("matrix {t} ({rows}×{cols}): mc {} vs exact {exact}, stderr {se}", mc.value)
        })?;
    }
    let mut max_rel: f64 = 0.0;
    for t in 0..50u64 {
        let rows = rng.random_range(2..=12);
        let cols = rng.random_range(1..=30);
        let mat = random_binary(&mut rng, rows, cols);
        let est = peeling_complexity(|_| Ok(mat.clone()), 2, 1, t).map_err(err)?;
        let oracle = brute_peeling(&mat);
        // same scale as the tolerance below, so a near-zero oracle does not blow it up
        max_rel = max_rel.max((est.value - oracle).abs() / oracle.abs().max(1.0));
        ensure(est.inner_trials.is_none(), || "inner Rademacher was not exact".into())?;
        ensure(
            (est.value - oracle).abs() <= PEELING_MATCH_REL * oracle.abs().max(1.0),
            || format!("peeling {} vs enumeration {oracle} on matrix {t}", est.value),
        )?;
    }
    Ok(format!(
        "100 matrices, worst |mc−exact|/stderr {worst_z:.2}; 50 peeling matches, max rel gap {max_rel:.1e}"
    ))
}

/// Minimum internal ℓ∞ cover by trying every subset in order of size.
fn brute_cover(mat: &LossMatrix, eps: f64) -> usize {
    let p = mat.cols();
    let dist = |a: usize, b: usize| {
        mat.column(a)
            .iter()
            .zip(mat.column(b))
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    };
    let mut best = p;
    for mask in 1u32..1 << p {
        let size = mask.count_ones() as usize;
        if size >= best {
            continue;
        }
        if (0..p).all(|j| (0..p).any(|c| mask >> c & 1 == 1 && dist(c, j) <= eps)) {
            best = size;
        }
    }
    best
}

fn c4_cover_correctness() -> Result<String, String> {
    let mut rng = substream(4, &[0]);
    let levels = [0.0, 0.25, 0.5, 0.75, 1.0];
    let radii = [0.1, 0.25, 0.3, 0.5, 0.75];
    let mut greedy_larger = 0;
    for t in 0..500 {
        let rows = rng.random_range(1..=8);
        let cols = rng.random_range(1..=10);
        let c: Vec<Vec<f64>> = (0..cols)
            .map(|_| (0..rows).map(|_| levels[rng.random_range(0..levels.len())]).collect())
            .collect();
        let mat = LossMatrix::from_columns(c, RangeTag::UnitInterval).map_err(err)?;
        let mut prev = usize::MAX;
        for &eps in &radii {
            let exact = covering_number_linf(&mat, eps, CoverMode::Exact).map_err(err)?.value as usize;
            let greedy = covering_number_linf(&mat, eps, CoverMode::Greedy).map_err(err)?.value as usize;
            let brute = brute_cover(&mat, eps);
            ensure(exact == brute, || format!("case {t}, eps {eps}: exact {exact} vs exhaustive {brute}"))?;
            ensure(greedy >= exact, || format!("case {t}, eps {eps}: greedy {greedy} < exact {exact}"))?;
            ensure(exact <= prev, || format!("case {t}: cover grew from {prev} to {exact} at eps {eps}"))?;
            greedy_larger += usize::from(greedy > exact);
            prev = exact;
        }
    }
    Ok(format!("500 matrices × 5 radii agree; greedy strictly larger in {greedy_larger} cases"))
}

fn c5_binomial_lemma() -> Result<String, String> {
    let r = verify_binomial_lemma(200).map_err(err)?;
    let up = r.min_upper.ok_or("no upper-tail checks ran")?;
    let lo = r.min_lower.ok_or("no lower-tail checks ran")?;
    ensure(r.grid_points == 200, || format!("grid has {} points", r.grid_points))?;
    ensure(r.failures == 0 && r.holds, || format!("{} failures", r.failures))?;
    ensure(up.probability > 0.25 && lo.probability > 0.25, || {
        format!("min tails {} / {}", up.probability, lo.probability)
    })?;
    Ok(format!(
        "{} checks, min Pr[X≥mp] = {:.6} (m={}), min Pr[X≤mp] = {:.6} (m={})",
        r.checks, up.probability, up.m, lo.probability, lo.m
    ))
}

fn c6_monotone_ratio() -> Result<String, String> {
    let r = verify_monotone_ratio(10_000, 1e-6, 6).map_err(err)?;
    ensure(r.holds && r.x_failures == 0 && r.y_failures == 0, || {
        format!("{} x-failures, {} y-failures", r.x_failures, r.y_failures)
    })?;
    Ok(format!("10⁴ points, min gain in x {:.2e}, min drop in y {:.2e}", r.min_x_gain, r.min_y_drop))
}

fn c7_bound_coverage() -> Result<String, String> {
    let cfg = ExperimentConfig::load(&repo_root().join("configs/coverage-reference.json")).map_err(err)?;
    ensure(
        cfg.class.pool_size == 50
            && cfg.params.m == 200
            && cfg.params.rho == 0.2
            && cfg.params.delta == 0.05
            && cfg.params.alpha == 2.0
            && cfg.trials == 2000,
        || "reference config drifted from the criterion".into(),
    )?;
    let rep = validate_bounds(&cfg).map_err(err)?;
    let mut parts = Vec::new();
    for f in [Family::CovAlpha2, Family::Rad] {
        let v = rep.family(f).ok_or_else(|| format!("{f} missing"))?;
        ensure(v.violation_rate <= cfg.params.delta, || {
            format!("{f}: violation rate {} > δ", v.violation_rate)
        })?;
        parts.push(format!(
            "{f} {}/{} CI [{:.4}, {:.4}] vacuous {} ({})",
            v.violations, v.trials, v.ci_low, v.ci_high, v.vacuous_trials, v.complexity.detail
        ));
    }
    Ok(parts.join("; "))
}

fn c8_dichotomy_direction() -> Result<String, String> {
    let mut rng = substream(8, &[0]);
    let mut min_gap = f64::INFINITY;
    for t in 0..20u64 {
        let m = rng.random_range(4..=12);
        let p = rng.random_range(2..=20);
        // random axis-aligned stumps on standard gaussian points in the plane
        let stumps: Vec<(usize, f64, bool)> = (0..p)
            .map(|_| (rng.random_range(0..2), rng.sample::<f64, _>(StandardNormal), rng.random()))
            .collect();
        let sampler = |seed: u64| {
            let mut r = substream(seed, &[t]);
            let pts: Vec<[f64; 2]> = (0..m)
                .map(|_| [r.sample(StandardNormal), r.sample(StandardNormal)])
                .collect();
            let cols = stumps
                .iter()
                .map(|&(axis, th, flip)| pts.iter().map(|x| f64::from(u8::from((x[axis] > th) != flip))).collect())
                .collect();
            LossMatrix::from_columns(cols, RangeTag::Binary)
        };
        let peel = peeling_complexity(sampler, 64, 1, 800 + t).map_err(err)?;
        let dich = rm_upper_dichotomy(sampler, 64, 900 + t).map_err(err)?;
        ensure(peel.inner_trials.is_none(), || "inner Rademacher was not exact".into())?;
        ensure(dich.value >= peel.value, || {
            format!("class {t} (m={m}, P={p}): dichotomy {} < peeling {}", dich.value, peel.value)
        })?;
        min_gap = min_gap.min(dich.value - peel.value);
    }
    Ok(format!("20 stump classes, smallest margin dichotomy − peeling = {min_gap:.4}"))
}

fn c9_tightness() -> Result<String, String> {
    let text = std::fs::read_to_string(repo_root().join("configs/tightness-reference.json")).map_err(err)?;
    let cfg: TightnessConfig = serde_json::from_str(&text).map_err(err)?;
    ensure(cfg.c_prime == 1.0 && cfg.beta_ratio == 1.0, || "reference config must use c′ = 1, β = β′".into())?;
    let rep = compare_tightness(&cfg).map_err(err)?;
    let mut zero_rows = 0;
    for r in &rep.rows {
        ensure(r.new_value == new_form(r.emp, r.beta) && r.old_value == old_form(r.emp, r.beta_prime, 1.0), || {
            format!("row {r:?} does not match the closed forms")
        })?;
        ensure(r.new_smaller == (r.new_value < r.old_value), || format!("flag mismatch in {r:?}"))?;
        if let Some(x) = r.crossover_emp {
            let near = (r.emp - x).abs() <= 1e-9 * x.max(1.0);
            ensure(near || r.new_smaller == (r.emp < x), || format!("crossover disagrees in {r:?}"))?;
        } else {
            ensure(!r.new_smaller, || format!("no crossover but new form smaller in {r:?}"))?;
        }
        if r.emp == 0.0 && r.beta <= 1.0 {
            zero_rows += 1;
            ensure(r.new_value <= r.old_value, || format!("new form larger at emp = 0: {r:?}"))?;
        }
    }
    ensure(zero_rows > 0 && rep.zero_emp_new_not_larger, || "no emp = 0 rows checked".into())?;
    Ok(format!(
        "{} rows re-derived; {zero_rows} rows at emp = 0 all have new ≤ old; new smaller in {}",
        rep.rows.len(),
        rep.new_smaller_count
    ))
}

fn c10_bound_min() -> Result<String, String> {
    let planted = SyntheticDistribution::MarginSeparable {
        w_star: vec![0.6, 0.8],
        gap: 0.3,
        radius: 1.0,
        noise_rate: 0.0,
    };
    let s = planted.sample(500, 10).map_err(err)?;
    let grid = [0.05, 0.1, 0.2, 0.3];
    let r = train_bound_min(&s, &grid, &BoundMinSettings::default(), 10).map_err(err)?;
    ensure(r.objective == 0.0, || format!("objective {} at rho {}", r.objective, r.rho))?;
    let mut max_norm = l2_norm(&r.w);
    // the norm constraint must hold on noisy data as well
    for (seed, noise) in [(11u64, 0.0), (12, 0.1), (13, 0.3)] {
        let d = SyntheticDistribution::MarginSeparable {
            w_star: vec![0.6, 0.8],
            gap: 0.1,
            radius: 1.0,
            noise_rate: noise,
        };
        let s = d.sample(500, seed).map_err(err)?;
        let q = train_bound_min(&s, &grid, &BoundMinSettings::default(), seed).map_err(err)?;
        max_norm = max_norm.max(l2_norm(&q.w));
    }
    ensure(max_norm <= 1.0 + NORM_SLACK, || format!("‖w‖ = {max_norm}"))?;
    Ok(format!("objective 0 at rho {}, max ‖w‖ over 4 runs {max_norm:.12}", r.rho))
}

fn run_cli(args: &[&str], threads: &str, via_env: bool) -> Result<Vec<u8>, String> {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_marginbound"));
    cmd.args(args).current_dir(repo_root());
    if via_env {
        cmd.env("MARGINBOUND_THREADS", threads);
    } else {
        cmd.env_remove("MARGINBOUND_THREADS").args(["--threads", threads]);
    }
    let out = cmd.output().map_err(err)?;
    ensure(out.status.success(), || {
        format!("{args:?} exited {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr))
    })?;
    Ok(out.stdout)
}

fn c11_determinism() -> Result<String, String> {
    let dir = tempfile::tempdir().map_err(err)?;
    let matrix = dir.path().join("m.csv");
    let mut rng = substream(11, &[0]);
    let mat = random_binary(&mut rng, 16, 12);
    mat.write_csv(std::fs::File::create(&matrix).map_err(err)?).map_err(err)?;
    let matrix = matrix.to_string_lossy().to_string();
    let runs: Vec<Vec<&str>> = vec![
        vec!["bound", "--family", "rad-all-alpha", "--emp", "0.02", "--rm", "3", "--m", "100000", "--delta", "0.05", "--alphas", "1.25,1.5,2"],
        vec!["complexity", "--measure", "rademacher-mc", "--matrix", &matrix, "--range", "binary", "--n-sigma", "5000", "--seed", "4"],
        vec!["validate", "configs/coverage-all-families.json", "--set", "trials=60", "--set", "complexity.holdout=200000"],
        vec!["validate", "configs/coverage-reference.json", "--set", "trials=200", "--format", "csv"],
        vec!["validate", "configs/coverage-trained.json", "--set", "trials=40"],
        vec!["compare", "configs/tightness-reference.json", "--format", "csv"],
        vec!["train", "--distribution", "configs/planted-separator.json", "--m", "300", "--bound-min", "--seed", "5"],
        vec!["train", "--distribution", "configs/planted-separator.json", "--m", "300", "--trainer", r#"{"method":"boost-stumps","rounds":8}"#, "--seed", "5"],
        vec!["verify", "binomial", "--m-max", "60"],
        vec!["verify", "monotone", "--points", "2000", "--seed", "6"],
    ];
    let mut bytes = 0;
    for args in &runs {
        let a = run_cli(args, "1", false)?;
        let b = run_cli(args, "4", false)?;
        let c = run_cli(args, "3", true)?;
        ensure(a == b && a == c, || format!("{} differs across thread counts", args.join(" ")))?;
        ensure(!a.is_empty(), || format!("{} wrote nothing", args.join(" ")))?;
        bytes += a.len();
    }
    Ok(format!("{} invocations × threads {{1, 4, 3 via env}} byte-identical ({bytes} bytes each set)", runs.len()))
}

fn main() {
    let criteria: [(u32, &str, Check, Duration); 11] = [
        (1, "formula fidelity", c1_formula_fidelity, Duration::from_secs(1)),
        (2, "solver soundness", c2_solver_soundness, Duration::from_secs(10)),
        (3, "estimator vs oracle", c3_estimator_vs_oracle, Duration::from_secs(120)),
        (4, "cover correctness", c4_cover_correctness, Duration::from_secs(60)),
        (5, "binomial quarter lemma", c5_binomial_lemma, Duration::from_secs(60)),
        (6, "monotone ratio lemma", c6_monotone_ratio, Duration::from_secs(5)),
        (7, "bound coverage", c7_bound_coverage, Duration::from_secs(600)),
        (8, "dichotomy bound direction", c8_dichotomy_direction, Duration::from_secs(120)),
        (9, "tightness regime", c9_tightness, Duration::from_secs(5)),
        (10, "bound minimization", c10_bound_min, Duration::from_secs(60)),
        (11, "determinism across threads", c11_determinism, Duration::from_secs(600)),
    ];
    let mut failed = 0;
    for (id, name, check, budget) in criteria {
        let start = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let took = start.elapsed();
        let res = match res {
            Ok(d) if took > budget => Err(format!("{d}; over budget {:.0?}", budget)),
            other => other,
        };
        let (tag, detail) = match &res {
            Ok(d) => ("PASS", d.as_str()),
            Err(e) => ("FAIL", e.as_str()),
        };
        failed += usize::from(res.is_err());
        println!("{tag} criterion {id:>2} {name:<28} {:>8.2}s  {detail}", took.as_secs_f64());
    }
    println!("acceptance: {} passed, {failed} failed", 11 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
