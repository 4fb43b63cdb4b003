//! Direct minimization of the margin bound over norm-capped linear predictors:
//! `(1/m) Σ Φ_ρ(y w·x) + (λ/ρ) √((1/m) Σ Φ_ρ(y w·x))` with the ramp `Φ_ρ`
//! and `‖w‖₂ ≤ 1`. The problem is non-convex; each grid `ρ` gets several
//! random restarts of projected subgradient descent with step `1/√t`.

use marginbound::hypothesis::{dot, project_l2_ball, Linear};
use marginbound::rng::{derive_seed, substream};
use marginbound::{Error, Hypothesis, LabeledSample, Result};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// `min(1, max(0, 1 − u/ρ))`.
pub fn ramp(u: f64, rho: f64) -> f64 {
    (1.0 - u / rho).clamp(0.0, 1.0)
}

/// The bound-minimization objective at `w`.
pub fn objective(w: &[f64], s: &LabeledSample, rho: f64, lambda: f64) -> f64 {
    let a = mean_ramp(w, s, rho);
    a + lambda / rho * a.sqrt()
}

fn mean_ramp(w: &[f64], s: &LabeledSample, rho: f64) -> f64 {
    (0..s.len()).map(|i| ramp(s.label(i) * dot(w, s.point(i)), rho)).sum::<f64>() / s.len() as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundMinSettings {
    pub lambda: f64,
    pub restarts: usize,
    pub iterations: usize,
    pub step: f64,
}

impl Default for BoundMinSettings {
    fn default() -> Self {
        BoundMinSettings {
            lambda: 0.01,
            restarts: 16,
            iterations: 500,
            step: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundMinResult {
    pub hypothesis: Hypothesis,
    pub w: Vec<f64>,
    pub rho: f64,
    pub objective: f64,
    /// Best objective so far after each iteration of the winning run.
    pub best_so_far: Vec<f64>,
    /// Objective at each run's starting point, in (ρ, restart) order.
    pub initial_objectives: Vec<f64>,
}

struct Run {
    w: Vec<f64>,
    objective: f64,
    initial: f64,
    trace: Vec<f64>,
}

fn run(s: &LabeledSample, rho: f64, cfg: &BoundMinSettings, seed: u64) -> Run {
    let d = s.dim();
    let m = s.len() as f64;
    let mut rng = substream(seed, &[0x424D_494E]);
    // uniform in the unit ball: gaussian direction, radius u^{1/d}
    let mut w: Vec<f64> = (0..d).map(|_| StandardNormal.sample(&mut rng)).collect();
    let norm = w.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-300);
    let r = rng.random::<f64>().powf(1.0 / d as f64);
    w.iter_mut().for_each(|v| *v *= r / norm);

    let initial = objective(&w, s, rho, cfg.lambda);
    let mut best = (initial, w.clone());
    let mut trace = Vec::with_capacity(cfg.iterations + 1);
    trace.push(initial);
    for t in 1..=cfg.iterations {
        let a = mean_ramp(&w, s, rho);
        if a == 0.0 {
            break;
        }
        // ∂√a/∂a is taken as 0 at a = 0, which is unreachable here
        let scale = 1.0 + cfg.lambda / rho / (2.0 * a.sqrt());
        let mut g = vec![0.0; d];
        for i in 0..s.len() {
            let y = s.label(i);
            let x = s.point(i);
            let u = y * dot(&w, x);
            if u > 0.0 && u < rho {
                for (gj, xj) in g.iter_mut().zip(x) {
                    *gj -= scale * y * xj / (rho * m);
                }
            }
        }
        if g.iter().all(|v| *v == 0.0) {
            break;
        }
        let eta = cfg.step / (t as f64).sqrt();
        for (wj, gj) in w.iter_mut().zip(&g) {
            *wj -= eta * gj;
        }
        project_l2_ball(&mut w, 1.0);
        let obj = objective(&w, s, rho, cfg.lambda);
        if obj < best.0 {
            best = (obj, w.clone());
        }
        trace.push(best.0);
    }
    Run {
        w: best.1,
        objective: best.0,
        initial,
        trace,
    }
}

/// Search `rho_grid × restarts` and return the pair with the lowest objective.
/// Ties go to the earlier grid point and restart.
pub fn train_bound_min(
    s: &LabeledSample,
    rho_grid: &[f64],
    cfg: &BoundMinSettings,
    seed: u64,
) -> Result<BoundMinResult> {
    if rho_grid.is_empty() {
        return Err(Error::Input("rho grid is empty".into()));
    }
    if let Some(r) = rho_grid.iter().find(|r| !(**r > 0.0 && r.is_finite())) {
        return Err(Error::Input(format!("grid margins must be positive, got {r}")));
    }
    if !(cfg.lambda >= 0.0) || cfg.restarts == 0 || !(cfg.step > 0.0) {
        return Err(Error::Input("need lambda ≥ 0, restarts ≥ 1 and step > 0".into()));
    }
    if s.is_empty() {
        return Err(Error::Input("cannot train on an empty sample".into()));
    }
    let jobs: Vec<(usize, usize)> = (0..rho_grid.len())
        .flat_map(|g| (0..cfg.restarts).map(move |r| (g, r)))
        .collect();
    let runs: Vec<Run> = jobs
        .par_iter()
        .map(|&(g, r)| run(s, rho_grid[g], cfg, derive_seed(seed, &[g as u64, r as u64])))
        .collect();
    let mut best = 0;
    for (k, r) in runs.iter().enumerate() {
        if r.objective < runs[best].objective {
            best = k;
        }
    }
    let rho = rho_grid[jobs[best].0];
    let w = runs[best].w.clone();
    Ok(BoundMinResult {
        hypothesis: Linear::new(w.clone(), 1.0)?.into(),
        w,
        rho,
        objective: runs[best].objective,
        best_so_far: runs[best].trace.clone(),
        initial_objectives: runs.iter().map(|r| r.initial).collect(),
    })
}
