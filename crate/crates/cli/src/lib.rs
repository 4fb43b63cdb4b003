//! `marginbound` command line.
//!
//! Every subcommand is a thin adapter over one library call and writes exactly
//! one artifact (stdout unless `--output` is given). Diagnostics go to stderr.

pub mod emit;

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use marginbound::bounds::{
    bound_cov_alpha, bound_cov_alpha2, bound_cov_fat, bound_cov_uniform_rho, bound_rad, bound_rad_all_alpha,
    bound_rad_smooth, bound_unbounded, bound_unbounded_uniform_rho, BoundParams, BoundReport, Family,
    REPORT_CSV_HEADER,
};
use marginbound::complexity::{
    count_dichotomies, covering_number_l2, covering_number_linf, fat_dim_formula, fat_shattering_exact,
    rademacher_exact, rademacher_mc, worst_case_rademacher, ComplexityEstimate, CoverMode, FatDimParams, LossMatrix,
    RangeTag,
};
use marginbound::distribution::SyntheticDistribution;
use marginbound::risk::empirical_risk;
use marginbound::{Error, Hypothesis, LabeledSample, Result};
use marginbound_harness::boundmin::{train_bound_min, BoundMinSettings};
use marginbound_harness::config::apply_overrides;
use marginbound_harness::lemmas::{verify_binomial_lemma, verify_monotone_ratio};
use marginbound_harness::tightness::{compare_tightness, TightnessConfig, TIGHTNESS_CSV_HEADER};
use marginbound_harness::train::{train, TrainerSpec};
use marginbound_harness::validate::VALIDITY_CSV_HEADER;
use marginbound_harness::{validate_bounds, ExperimentConfig};
use serde::Serialize;

use crate::emit::{canonical_json, csv_text, emit, DIGITS};

pub const EXIT_OK: i32 = 0;
/// A verification ran to completion and found a counterexample.
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CAPABILITY: i32 = 3;
pub const EXIT_NOT_APPLICABLE: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "marginbound", version, about = "Relative-deviation margin bounds and their empirical checks")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Artifact format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Write the artifact here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Worker threads. Never changes any emitted value.
    #[arg(long, env = "MARGINBOUND_THREADS", global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one bound family from its inputs.
    Bound(BoundArgs),
    /// Complexity of a finite class given as a loss matrix, or a class formula.
    Complexity(ComplexityArgs),
    /// Monte-Carlo coverage campaign from an experiment config.
    Validate(ConfigArgs),
    /// New-form vs old-form tightness table from a tightness config.
    Compare(ConfigArgs),
    /// Train a predictor on a sample.
    Train(TrainArgs),
    /// Numeric checks of the auxiliary lemmas.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[arg(long, value_parser = parse_family)]
    pub family: Family,
    /// Empirical margin loss (or empirical loss for the unbounded families).
    #[arg(long)]
    pub emp: Option<f64>,
    /// Log covering number.
    #[arg(long = "log-n", alias = "logN", alias = "logn")]
    pub log_n: Option<f64>,
    /// Fat-shattering dimension (cov-fat).
    #[arg(long)]
    pub fat_dim: Option<f64>,
    /// Peeling complexity (rad, rad-all-alpha).
    #[arg(long)]
    pub rm: Option<f64>,
    /// Worst-case Rademacher complexity (rad-smooth).
    #[arg(long)]
    pub rmax: Option<f64>,
    /// α-moment of the loss (unbounded families).
    #[arg(long)]
    pub moment: Option<f64>,
    #[arg(long)]
    pub m: Option<u64>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long, default_value_t = 2.0)]
    pub alpha: f64,
    /// Margin. Only families that use it need it; the default just fills the report.
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub tau: f64,
    /// Upper end of the margin range for uniform-in-ρ families.
    #[arg(long, default_value_t = 1.0)]
    pub r: f64,
    /// Comma-separated α grid (rad-all-alpha).
    #[arg(long, value_delimiter = ',')]
    pub alphas: Vec<f64>,
    /// Comma-separated ρ grid (unbounded-uniform-rho).
    #[arg(long, value_delimiter = ',')]
    pub rho_grid: Vec<f64>,
    /// Cap zero-one bounds at 1 (the report says so).
    #[arg(long)]
    pub clamp: bool,
    /// Print the per-term breakdown instead of the report.
    #[arg(long)]
    pub explain: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Measure {
    CoverLinf,
    CoverL2,
    Dichotomies,
    RademacherExact,
    RademacherMc,
    FatShattering,
    /// Fat-shattering dimension formula of a class (`--class`).
    FatFormula,
    /// Worst-case Rademacher formula of a class (`--class`, `--m`).
    WorstCaseRademacher,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Range {
    Binary,
    UnitInterval,
    Real,
}

#[derive(Debug, Args)]
pub struct ComplexityArgs {
    #[arg(long, value_enum)]
    pub measure: Measure,
    /// Loss matrix as CSV (rows are sample points) or versioned JSON.
    #[arg(long)]
    pub matrix: Option<PathBuf>,
    /// Value range of a CSV matrix.
    #[arg(long, value_enum, default_value_t = Range::UnitInterval)]
    pub range: Range,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub greedy: bool,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long, default_value_t = 1000)]
    pub n_sigma: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Class parameters as JSON, e.g. '{"class":"linear","radius":1,"rho":0.1}'.
    #[arg(long)]
    pub class: Option<String>,
    #[arg(long)]
    pub m: Option<u64>,
}

#[derive(Debug, Args)]
pub struct ConfigArgs {
    /// Config file (JSON).
    pub config: PathBuf,
    /// `section.key=value` override; repeatable.
    #[arg(long = "set", short = 's')]
    pub overrides: Vec<String>,
    /// Replaces the config's seed.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// Labeled sample JSON.
    #[arg(long, conflicts_with = "distribution")]
    pub sample: Option<PathBuf>,
    /// Distribution JSON to draw `--m` points from.
    #[arg(long, requires = "m")]
    pub distribution: Option<PathBuf>,
    #[arg(long)]
    pub m: Option<usize>,
    /// Trainer spec JSON, e.g. '{"method":"boost-stumps","rounds":10}' or a file.
    #[arg(long, conflicts_with = "bound_min")]
    pub trainer: Option<String>,
    /// Minimize the margin bound directly over the unit ball.
    #[arg(long)]
    pub bound_min: bool,
    #[arg(long, value_delimiter = ',', default_values_t = [0.05, 0.1, 0.2, 0.4])]
    pub rho_grid: Vec<f64>,
    #[arg(long, default_value_t = 0.01)]
    pub lambda: f64,
    #[arg(long, default_value_t = 16)]
    pub restarts: usize,
    #[arg(long, default_value_t = 500)]
    pub iterations: usize,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(subcommand)]
    pub lemma: Lemma,
}

#[derive(Debug, Subcommand)]
pub enum Lemma {
    /// Binomial tails: Pr[X ≥ mp] > 1/4 and Pr[X ≤ mp] > 1/4 on the valid ranges.
    Binomial {
        #[arg(long, default_value_t = 200)]
        m_max: u64,
    },
    /// Monotonicity of (x − y)/(x + y + η)^{1/α}.
    Monotone {
        #[arg(long, default_value_t = 10_000)]
        points: usize,
        #[arg(long, default_value_t = 1e-6)]
        perturbation: f64,
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn parse_family(s: &str) -> std::result::Result<Family, String> {
    Family::parse(s).map_err(|e| e.to_string())
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Capability(_) => EXIT_CAPABILITY,
        Error::Domain(_) | Error::Applicability(_) => EXIT_NOT_APPLICABLE,
        _ => EXIT_INPUT,
    }
}

/// Parse `argv` (including the program name) and run.
pub fn run<I, S>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = stdout.write_all(text.as_bytes());
            } else {
                let _ = stderr.write_all(text.as_bytes());
            }
            return code;
        }
    };
    let threads = cli.global.threads.unwrap_or(0);
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(stderr, "error: cannot start {threads} worker threads: {e}");
            return EXIT_INPUT;
        }
    };
    let mut notes = Vec::new();
    let result = pool.install(|| dispatch(&cli, &mut notes));
    for n in &notes {
        let _ = writeln!(stderr, "{n}");
    }
    let written = result.and_then(|a| {
        emit(&a.text, a.path.as_deref(), stdout)?;
        Ok(a.code)
    });
    match written {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

/// A rendered report and where it goes.
struct Artifact {
    text: String,
    path: Option<PathBuf>,
    code: i32,
}

fn dispatch(cli: &Cli, notes: &mut Vec<String>) -> Result<Artifact> {
    let g = &cli.global;
    let out = g.output.clone();
    let done = |text: String, path: Option<PathBuf>| Artifact { text, path, code: EXIT_OK };
    match &cli.command {
        Command::Bound(a) => {
            let report = bound(a)?;
            let text = if a.explain {
                report.explain(DIGITS)
            } else {
                match g.format {
                    Format::Json => canonical_json(&report)?,
                    Format::Csv => csv_text(REPORT_CSV_HEADER, &[report.csv_row(DIGITS)]),
                }
            };
            if report.vacuous {
                notes.push("note: the bound is vacuous (≥ 1) at these inputs".into());
            }
            Ok(done(text, out))
        }
        Command::Complexity(a) => {
            let c = complexity(a)?;
            let text = match g.format {
                Format::Json => canonical_json(&c)?,
                Format::Csv => csv_text(COMPLEXITY_CSV_HEADER, &[c.csv_row()]),
            };
            Ok(done(text, out))
        }
        Command::Validate(a) => {
            let mut cfg: ExperimentConfig = load_config(&a.config, &a.overrides)?;
            if let Some(s) = a.seed {
                cfg.seed = s;
            }
            cfg.validate()?;
            let report = validate_bounds(&cfg)?;
            for f in &report.families {
                notes.push(format!(
                    "{:<22} violations {}/{} rate {} CI [{}, {}]",
                    f.family.name(),
                    f.violations,
                    f.trials,
                    marginbound::numfmt::format_sig(f.violation_rate, 4),
                    marginbound::numfmt::format_sig(f.ci_low, 4),
                    marginbound::numfmt::format_sig(f.ci_high, 4)
                ));
            }
            let text = match g.format {
                Format::Json => canonical_json(&report)?,
                Format::Csv => csv_text(VALIDITY_CSV_HEADER, &report.csv_rows(DIGITS)),
            };
            let fallback = match g.format {
                Format::Json => cfg.output.json.as_deref(),
                Format::Csv => cfg.output.csv.as_deref(),
            };
            Ok(done(text, out.or(fallback.map(PathBuf::from))))
        }
        Command::Compare(a) => {
            if a.seed.is_some() {
                notes.push("note: compare is deterministic; --seed is ignored".into());
            }
            let cfg: TightnessConfig = load_config(&a.config, &a.overrides)?;
            let report = compare_tightness(&cfg)?;
            let text = match g.format {
                Format::Json => canonical_json(&report)?,
                Format::Csv => csv_text(TIGHTNESS_CSV_HEADER, &report.csv_rows(DIGITS)),
            };
            Ok(done(text, out))
        }
        Command::Train(a) => {
            let t = train_cmd(a)?;
            let text = match g.format {
                Format::Json => canonical_json(&t)?,
                Format::Csv => csv_text(TRAIN_CSV_HEADER, &[t.csv_row()]),
            };
            Ok(done(text, out))
        }
        Command::Verify(v) => {
            let (text, holds) = match &v.lemma {
                Lemma::Binomial { m_max } => {
                    let r = verify_binomial_lemma(*m_max)?;
                    let text = match g.format {
                        Format::Json => canonical_json(&r)?,
                        Format::Csv => {
                            let w = |t: &Option<marginbound_harness::lemmas::TailWitness>| {
                                t.map(|t| marginbound::numfmt::format_sig(t.probability, DIGITS))
                                    .unwrap_or_default()
                            };
                            csv_text(
                                "m_max,grid_points,checks,min_upper,min_lower,failures,holds",
                                &[format!(
                                    "{},{},{},{},{},{},{}",
                                    r.m_max,
                                    r.grid_points,
                                    r.checks,
                                    w(&r.min_upper),
                                    w(&r.min_lower),
                                    r.failures,
                                    r.holds
                                )],
                            )
                        }
                    };
                    (text, r.holds)
                }
                Lemma::Monotone {
                    points,
                    perturbation,
                    seed,
                } => {
                    let seed = require(*seed, "--seed")?;
                    let r = verify_monotone_ratio(*points, *perturbation, seed)?;
                    let text = match g.format {
                        Format::Json => canonical_json(&r)?,
                        Format::Csv => csv_text(
                            "points,perturbation,x_failures,y_failures,min_x_gain,min_y_drop,holds",
                            &[format!(
                                "{},{},{},{},{},{},{}",
                                r.points,
                                marginbound::numfmt::format_sig(r.perturbation, DIGITS),
                                r.x_failures,
                                r.y_failures,
                                marginbound::numfmt::format_sig(r.min_x_gain, DIGITS),
                                marginbound::numfmt::format_sig(r.min_y_drop, DIGITS),
                                r.holds
                            )],
                        ),
                    };
                    (text, r.holds)
                }
            };
            let mut a = done(text, out);
            if !holds {
                notes.push("verification found a counterexample".into());
                a.code = EXIT_CHECK_FAILED;
            }
            Ok(a)
        }
    }
}

fn require<T>(v: Option<T>, flag: &str) -> Result<T> {
    v.ok_or_else(|| Error::Input(format!("missing required flag {flag}")))
}

fn require_for<T>(v: Option<T>, flag: &str, family: Family) -> Result<T> {
    v.ok_or_else(|| Error::Input(format!("missing required flag {flag} for family {family}")))
}

/// Read a JSON config, apply overrides and deserialize strictly.
pub fn load_config<T>(path: &Path, overrides: &[String]) -> Result<T>
where
    T: Serialize + serde::de::DeserializeOwned,
{
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("cannot read config {}: {e}", path.display())))?;
    let cfg: T = serde_json::from_str(&text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    apply_overrides(&cfg, overrides)
}

/// Evaluate the bound selected by `--family`.
pub fn bound(a: &BoundArgs) -> Result<BoundReport> {
    let f = a.family;
    let m = require_for(a.m, "--m", f)?;
    let delta = require_for(a.delta, "--delta", f)?;
    let uses_rho = matches!(
        f,
        Family::CovUniformRho | Family::RadSmooth | Family::Unbounded | Family::UnboundedUniformRho
    );
    let rho = if uses_rho {
        require_for(a.rho, "--rho", f)?
    } else {
        a.rho.unwrap_or(a.r)
    };
    let p = BoundParams::new(a.alpha, rho, delta, m)?.with_tau(a.tau)?.with_r(a.r)?;
    if a.tau != 0.0 && f != Family::CovAlpha {
        return Err(Error::Input(format!("--tau is only used by cov-alpha, not {f}")));
    }
    let emp = require_for(a.emp, "--emp", f)?;
    let report = match f {
        Family::CovAlpha => bound_cov_alpha(emp, require_for(a.log_n, "--log-n", f)?, &p)?,
        Family::CovAlpha2 => bound_cov_alpha2(emp, require_for(a.log_n, "--log-n", f)?, &p)?,
        Family::CovFat => bound_cov_fat(emp, require_for(a.fat_dim, "--fat-dim", f)?, &p)?,
        Family::CovUniformRho => {
            let log_n = require_for(a.log_n, "--log-n", f)?;
            bound_cov_uniform_rho(|_| Ok(emp), |_| Ok(log_n), &p)?
        }
        Family::Rad => bound_rad(emp, require_for(a.rm, "--rm", f)?, &p)?,
        Family::RadAllAlpha => {
            if a.alphas.is_empty() {
                return Err(Error::Input(format!("missing required flag --alphas for family {f}")));
            }
            bound_rad_all_alpha(emp, require_for(a.rm, "--rm", f)?, &a.alphas, &p)?
        }
        Family::RadSmooth => bound_rad_smooth(emp, require_for(a.rmax, "--rmax", f)?, &p)?,
        Family::Unbounded => bound_unbounded(
            emp,
            require_for(a.moment, "--moment", f)?,
            require_for(a.log_n, "--log-n", f)?,
            &p,
        )?,
        Family::UnboundedUniformRho => {
            if a.rho_grid.is_empty() {
                return Err(Error::Input(format!("missing required flag --rho-grid for family {f}")));
            }
            let log_n = require_for(a.log_n, "--log-n", f)?;
            bound_unbounded_uniform_rho(emp, require_for(a.moment, "--moment", f)?, |_| Ok(log_n), &a.rho_grid, &p)?
        }
    };
    Ok(if a.clamp { report.clamp() } else { report })
}

pub const COMPLEXITY_SCHEMA: &str = "marginbound.complexity.v1";
pub const COMPLEXITY_CSV_HEADER: &str = "measure,value,method,stderr,outer_trials,inner_trials,seed";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComplexityOutput {
    pub schema: String,
    pub measure: String,
    pub parameters: BTreeMap<String, f64>,
    pub estimate: ComplexityEstimate,
}

impl ComplexityOutput {
    fn csv_row(&self) -> String {
        let e = &self.estimate;
        let opt = |v: Option<String>| v.unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{}",
            self.measure,
            marginbound::numfmt::format_sig(e.value, DIGITS),
            serde_json::to_value(e.method)
                .ok()
                .and_then(|v| v.as_str().map(str::to_string))
                .unwrap_or_default(),
            opt(e.stderr.map(|s| marginbound::numfmt::format_sig(s, DIGITS))),
            opt(e.outer_trials.map(|n| n.to_string())),
            opt(e.inner_trials.map(|n| n.to_string())),
            opt(e.seed.map(|n| n.to_string())),
        )
    }
}

fn read_matrix(path: &Path, range: Range) -> Result<LossMatrix> {
    let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
    if is_json {
        return LossMatrix::from_json(&fs::read_to_string(path)?);
    }
    let tag = match range {
        Range::Binary => RangeTag::Binary,
        Range::UnitInterval => RangeTag::UnitInterval,
        Range::Real => RangeTag::Real,
    };
    LossMatrix::read_csv(fs::File::open(path)?, tag)
}

pub fn complexity(a: &ComplexityArgs) -> Result<ComplexityOutput> {
    let name = a.measure.to_possible_value().expect("no skipped variants").get_name().to_string();
    let mut parameters = BTreeMap::new();
    let mode = if a.greedy { CoverMode::Greedy } else { CoverMode::Exact };
    let matrix = || read_matrix(&require(a.matrix.clone(), "--matrix")?, a.range);
    let class = || -> Result<FatDimParams> {
        let raw = require(a.class.clone(), "--class")?;
        serde_json::from_str(&raw).map_err(|e| Error::Input(format!("--class: {e}")))
    };
    let estimate = match a.measure {
        Measure::CoverLinf | Measure::CoverL2 => {
            let eps = require(a.eps, "--eps")?;
            parameters.insert("eps".into(), eps);
            let m = matrix()?;
            if a.measure == Measure::CoverLinf {
                covering_number_linf(&m, eps, mode)?
            } else {
                covering_number_l2(&m, eps, mode)?
            }
        }
        Measure::Dichotomies => ComplexityEstimate::exact(count_dichotomies(&matrix()?)? as f64),
        Measure::RademacherExact => rademacher_exact(&matrix()?)?,
        Measure::RademacherMc => {
            let seed = require(a.seed, "--seed")?;
            rademacher_mc(&matrix()?, a.n_sigma, seed)?
        }
        Measure::FatShattering => {
            let gamma = require(a.gamma, "--gamma")?;
            parameters.insert("gamma".into(), gamma);
            ComplexityEstimate::exact(fat_shattering_exact(&matrix()?, gamma, None)? as f64)
        }
        Measure::FatFormula => ComplexityEstimate::formula(fat_dim_formula(&class()?)?),
        Measure::WorstCaseRademacher => {
            let m = require(a.m, "--m")?;
            parameters.insert("m".into(), m as f64);
            ComplexityEstimate::formula(worst_case_rademacher(&class()?, m as f64)?)
        }
    };
    Ok(ComplexityOutput {
        schema: COMPLEXITY_SCHEMA.into(),
        measure: name,
        parameters,
        estimate,
    })
}

pub const TRAIN_SCHEMA: &str = "marginbound.train.v1";
pub const TRAIN_CSV_HEADER: &str = "method,m,training_error,rho,objective";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrainOutput {
    pub schema: String,
    pub method: String,
    pub m: usize,
    pub seed: u64,
    pub hypothesis: Hypothesis,
    pub training_error: f64,
    /// Bound minimization only.
    pub rho: Option<f64>,
    pub objective: Option<f64>,
}

impl TrainOutput {
    fn csv_row(&self) -> String {
        let num = |x: f64| marginbound::numfmt::format_sig(x, DIGITS);
        format!(
            "{},{},{},{},{}",
            self.method,
            self.m,
            num(self.training_error),
            self.rho.map(num).unwrap_or_default(),
            self.objective.map(num).unwrap_or_default()
        )
    }
}

fn json_arg<T: serde::de::DeserializeOwned>(raw: &str, flag: &str) -> Result<T> {
    let text = if raw.trim_start().starts_with('{') {
        raw.to_string()
    } else {
        fs::read_to_string(raw).map_err(|e| Error::Input(format!("{flag}: cannot read {raw}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Error::Input(format!("{flag}: {e}")))
}

pub fn train_cmd(a: &TrainArgs) -> Result<TrainOutput> {
    let seed = require(a.seed, "--seed")?;
    let sample: LabeledSample = match (&a.sample, &a.distribution) {
        (Some(p), _) => LabeledSample::from_json(&fs::read_to_string(p)?)?,
        (None, Some(d)) => {
            let dist: SyntheticDistribution = json_arg(&fs::read_to_string(d)?, "--distribution")?;
            dist.sample(require(a.m, "--m")?, seed)?
        }
        (None, None) => return Err(Error::Input("missing required flag --sample (or --distribution)".into())),
    };
    if a.bound_min {
        let cfg = BoundMinSettings {
            lambda: a.lambda,
            restarts: a.restarts,
            iterations: a.iterations,
            ..BoundMinSettings::default()
        };
        let r = train_bound_min(&sample, &a.rho_grid, &cfg, seed)?;
        return Ok(TrainOutput {
            schema: TRAIN_SCHEMA.into(),
            method: "bound-min".into(),
            m: sample.len(),
            seed,
            training_error: empirical_risk(&r.hypothesis, &sample)?,
            hypothesis: r.hypothesis,
            rho: Some(r.rho),
            objective: Some(r.objective),
        });
    }
    let spec: TrainerSpec = json_arg(&require(a.trainer.clone(), "--trainer")?, "--trainer")?;
    let method = serde_json::to_value(&spec)?
        .get("method")
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default();
    let h = train(&spec, &sample, seed)?;
    Ok(TrainOutput {
        schema: TRAIN_SCHEMA.into(),
        method,
        m: sample.len(),
        seed,
        training_error: empirical_risk(&h, &sample)?,
        hypothesis: h,
        rho: None,
        objective: None,
    })
}
