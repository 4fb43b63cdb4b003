use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::complexity::Method;
use crate::error::{Error, Result};

/// Confidence and shape parameters shared by every bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    pub alpha: f64,
    pub rho: f64,
    pub delta: f64,
    pub m: u64,
    #[serde(default)]
    pub tau: f64,
    /// Upper end of the ρ range for bounds that hold uniformly in ρ.
    #[serde(default = "default_r")]
    pub r: f64,
}

fn default_r() -> f64 {
    1.0
}

impl BoundParams {
    /// Parameters with τ = 0 and r = 1.
    pub fn new(alpha: f64, rho: f64, delta: f64, m: u64) -> Result<Self> {
        let p = BoundParams {
            alpha,
            rho,
            delta,
            m,
            tau: 0.0,
            r: default_r(),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_tau(mut self, tau: f64) -> Result<Self> {
        self.tau = tau;
        self.validate()?;
        Ok(self)
    }

    pub fn with_r(mut self, r: f64) -> Result<Self> {
        self.r = r;
        self.validate()?;
        Ok(self)
    }

    pub fn with_rho(mut self, rho: f64) -> Result<Self> {
        self.rho = rho;
        self.validate()?;
        Ok(self)
    }

    pub fn with_alpha(mut self, alpha: f64) -> Result<Self> {
        self.alpha = alpha;
        self.validate()?;
        Ok(self)
    }

    /// δ = 1 is admitted as the degenerate no-confidence endpoint.
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 1.0 && self.alpha <= 2.0) {
            return Err(Error::input(format!("alpha must lie in (1, 2], got {}", self.alpha)));
        }
        if !(self.rho > 0.0 && self.rho.is_finite()) {
            return Err(Error::input(format!("rho must be positive, got {}", self.rho)));
        }
        if !(self.delta > 0.0 && self.delta <= 1.0) {
            return Err(Error::input(format!("delta must lie in (0, 1], got {}", self.delta)));
        }
        if self.m == 0 {
            return Err(Error::input("m must be positive"));
        }
        if !(self.tau >= 0.0 && self.tau.is_finite()) {
            return Err(Error::input(format!("tau must be nonnegative, got {}", self.tau)));
        }
        if !(self.r > 0.0 && self.r.is_finite()) {
            return Err(Error::input(format!("r must be positive, got {}", self.r)));
        }
        Ok(())
    }

    pub(crate) fn mf(&self) -> f64 {
        self.m as f64
    }

    pub(crate) fn log_inv_delta(&self) -> f64 {
        (1.0 / self.delta).ln()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    CovAlpha,
    CovAlpha2,
    CovFat,
    CovUniformRho,
    Rad,
    RadAllAlpha,
    RadSmooth,
    Unbounded,
    UnboundedUniformRho,
}

impl Family {
    pub const ALL: [Family; 9] = [
        Family::CovAlpha,
        Family::CovAlpha2,
        Family::CovFat,
        Family::CovUniformRho,
        Family::Rad,
        Family::RadAllAlpha,
        Family::RadSmooth,
        Family::Unbounded,
        Family::UnboundedUniformRho,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::CovAlpha => "cov-alpha",
            Family::CovAlpha2 => "cov-alpha2",
            Family::CovFat => "cov-fat",
            Family::CovUniformRho => "cov-uniform-rho",
            Family::Rad => "rad",
            Family::RadAllAlpha => "rad-all-alpha",
            Family::RadSmooth => "rad-smooth",
            Family::Unbounded => "unbounded",
            Family::UnboundedUniformRho => "unbounded-uniform-rho",
        }
    }

    /// The result the family evaluates, as numbered in the source text.
    pub fn reference(self) -> &'static str {
        match self {
            Family::CovAlpha => "Corollary 3.2",
            Family::CovAlpha2 => "Corollary 3.3",
            Family::CovFat => "Corollary 3.5",
            Family::CovUniformRho => "Corollary 3.4",
            Family::Rad => "Corollary 4.4",
            Family::RadAllAlpha => "Corollary 4.5",
            Family::RadSmooth => "Corollary 4.9",
            Family::Unbounded => "Corollary 5.2",
            Family::UnboundedUniformRho => "Corollary E.1",
        }
    }

    /// Whether the bounded quantity is a zero-one risk (so values ≥ 1 say nothing).
    pub fn is_zero_one(self) -> bool {
        !matches!(self, Family::Unbounded | Family::UnboundedUniformRho)
    }

    pub fn parse(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::input(format!("unknown bound family '{s}'")))
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Solver {
    ClosedForm,
    #[serde(rename = "lemma-D1")]
    LemmaD1,
    RootFind,
}

impl Solver {
    pub fn name(self) -> &'static str {
        match self {
            Solver::ClosedForm => "closed-form",
            Solver::LemmaD1 => "lemma-D1",
            Solver::RootFind => "root-find",
        }
    }
}

/// A named intermediate quantity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub name: String,
    pub value: f64,
}

/// Another resolution of the same inequality, reported next to the main value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Alternate {
    pub label: String,
    pub value: f64,
    pub solver: Solver,
}

/// Everything needed to audit one bound evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    #[serde(default = "report_schema")]
    pub schema: String,
    pub family: Family,
    pub params: BoundParams,
    /// Raw inputs as supplied by the caller.
    pub inputs: BTreeMap<String, f64>,
    pub empirical_term: f64,
    pub complexity_term: f64,
    pub complexity_method: Option<Method>,
    pub bound_value: f64,
    pub solver: Solver,
    pub terms: Vec<Term>,
    pub alternates: Vec<Alternate>,
    /// Zero-one families only: the value is at least 1 and carries no information.
    pub vacuous: bool,
    pub clamped: bool,
}

pub const REPORT_SCHEMA: &str = "marginbound.bound-report.v1";

fn report_schema() -> String {
    REPORT_SCHEMA.to_string()
}

pub const REPORT_CSV_HEADER: &str =
    "family,alpha,rho,delta,m,empirical_term,complexity_term,complexity_method,bound_value,solver,vacuous,clamped";

impl BoundReport {
    pub(crate) fn new(
        family: Family,
        params: BoundParams,
        empirical_term: f64,
        complexity_term: f64,
        bound_value: f64,
        solver: Solver,
    ) -> Self {
        BoundReport {
            schema: REPORT_SCHEMA.to_string(),
            family,
            params,
            inputs: BTreeMap::new(),
            empirical_term,
            complexity_term,
            complexity_method: None,
            bound_value,
            solver,
            terms: Vec::new(),
            alternates: Vec::new(),
            vacuous: family.is_zero_one() && bound_value >= 1.0,
            clamped: false,
        }
    }

    pub(crate) fn input(mut self, name: &str, value: f64) -> Self {
        self.inputs.insert(name.to_string(), value);
        self
    }

    pub(crate) fn term(mut self, name: &str, value: f64) -> Self {
        self.terms.push(Term {
            name: name.to_string(),
            value,
        });
        self
    }

    pub(crate) fn alternate(mut self, label: impl Into<String>, value: f64, solver: Solver) -> Self {
        self.alternates.push(Alternate {
            label: label.into(),
            value,
            solver,
        });
        self
    }

    pub fn term_value(&self, name: &str) -> Option<f64> {
        self.terms.iter().find(|t| t.name == name).map(|t| t.value)
    }

    pub fn alternate_value(&self, label: &str) -> Option<f64> {
        self.alternates.iter().find(|a| a.label == label).map(|a| a.value)
    }

    /// Record how the complexity input was obtained.
    pub fn with_method(mut self, method: Method) -> Self {
        self.complexity_method = Some(method);
        self
    }

    /// Cap a zero-one bound at 1, marking the report as clamped when that
    /// changes the value. Unbounded-loss reports are returned unchanged.
    pub fn clamp(mut self) -> Self {
        if self.family.is_zero_one() && self.bound_value > 1.0 {
            self.bound_value = 1.0;
            self.clamped = true;
        }
        self
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let r: BoundReport = serde_json::from_str(s)?;
        r.params.validate()?;
        Ok(r)
    }

    /// One CSV line matching [`REPORT_CSV_HEADER`], numbers in shortest
    /// round-trip form after rounding to `digits` significant digits.
    pub fn csv_row(&self, digits: usize) -> String {
        let num = |x: f64| crate::numfmt::format_sig(x, digits);
        let method = match self.complexity_method {
            Some(m) => serde_json::to_value(m)
                .ok()
                .and_then(|v| v.as_str().map(str::to_string))
                .unwrap_or_default(),
            None => String::new(),
        };
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.family,
            num(self.params.alpha),
            num(self.params.rho),
            num(self.params.delta),
            self.params.m,
            num(self.empirical_term),
            num(self.complexity_term),
            method,
            num(self.bound_value),
            self.solver.name(),
            self.vacuous,
            self.clamped
        )
    }

    /// Human-readable per-term breakdown.
    pub fn explain(&self, digits: usize) -> String {
        let num = |x: f64| crate::numfmt::format_sig(x, digits);
        let mut out = String::new();
        let _ = writeln!(out, "{} ({})", self.family, self.family.reference());
        let p = &self.params;
        let _ = writeln!(
            out,
            "  parameters: alpha={} rho={} delta={} m={} tau={} r={}",
            num(p.alpha),
            num(p.rho),
            num(p.delta),
            p.m,
            num(p.tau),
            num(p.r)
        );
        for (k, v) in &self.inputs {
            let _ = writeln!(out, "  input {k:<24} {}", num(*v));
        }
        let _ = writeln!(out, "  {:<30} {}", "empirical term", num(self.empirical_term));
        let _ = writeln!(out, "  {:<30} {}", "complexity term", num(self.complexity_term));
        for t in &self.terms {
            let _ = writeln!(out, "    {:<28} {}", t.name, num(t.value));
        }
        let _ = writeln!(out, "  {:<30} {} [{}]", "bound", num(self.bound_value), self.solver.name());
        for a in &self.alternates {
            let _ = writeln!(out, "    alt {:<24} {} [{}]", a.label, num(a.value), a.solver.name());
        }
        if self.vacuous {
            let _ = writeln!(out, "  vacuous: the value is at least 1");
        }
        if self.clamped {
            let _ = writeln!(out, "  clamped to 1");
        }
        out
    }
}
