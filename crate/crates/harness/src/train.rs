//! Desk-scale trainers for linear predictors, boosted stumps and a small
//! tanh network.

use marginbound::hypothesis::{dot, project_l1_ball, project_l2_ball, Activation, Ensemble, Ffnn, Linear, Stump};
use marginbound::rng::substream;
use marginbound::{Error, Hypothesis, LabeledSample, Result};
use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "kebab-case", deny_unknown_fields)]
pub enum TrainerSpec {
    /// Full-batch projected subgradient descent on the average hinge loss,
    /// step `step/√t`, keeping the iterate with the lowest objective.
    HingeSubgradientLinear { iterations: usize, norm_cap: f64, step: f64 },
    /// AdaBoost over axis-aligned stumps; final weights sum to one.
    BoostStumps { rounds: usize },
    /// One hidden tanh layer trained by full-batch gradient descent on the
    /// logistic loss; rows are projected onto the ℓ1 ball after every step.
    TinyMlp {
        width: usize,
        iterations: usize,
        step: f64,
        row_l1_cap: f64,
        init_scale: f64,
    },
}

impl TrainerSpec {
    pub fn produces_linear(&self) -> bool {
        matches!(self, TrainerSpec::HingeSubgradientLinear { .. })
    }
}

pub fn train(spec: &TrainerSpec, s: &LabeledSample, seed: u64) -> Result<Hypothesis> {
    if s.is_empty() {
        return Err(Error::Input("cannot train on an empty sample".into()));
    }
    match *spec {
        TrainerSpec::HingeSubgradientLinear {
            iterations,
            norm_cap,
            step,
        } => train_hinge(s, iterations, norm_cap, step),
        TrainerSpec::BoostStumps { rounds } => train_boost(s, rounds),
        TrainerSpec::TinyMlp {
            width,
            iterations,
            step,
            row_l1_cap,
            init_scale,
        } => train_mlp(s, width, iterations, step, row_l1_cap, init_scale, seed),
    }
}

fn hinge_objective(w: &[f64], s: &LabeledSample) -> f64 {
    (0..s.len())
        .map(|i| (1.0 - s.label(i) * dot(w, s.point(i))).max(0.0))
        .sum::<f64>()
        / s.len() as f64
}

fn train_hinge(s: &LabeledSample, iterations: usize, norm_cap: f64, step: f64) -> Result<Hypothesis> {
    if !(norm_cap > 0.0) || !(step > 0.0) {
        return Err(Error::Input("hinge trainer needs positive norm_cap and step".into()));
    }
    let d = s.dim();
    let m = s.len() as f64;
    let mut w = vec![0.0; d];
    let mut best = (hinge_objective(&w, s), w.clone());
    for t in 1..=iterations {
        let mut g = vec![0.0; d];
        for i in 0..s.len() {
            let y = s.label(i);
            let x = s.point(i);
            if y * dot(&w, x) < 1.0 {
                for (gj, xj) in g.iter_mut().zip(x) {
                    *gj -= y * xj / m;
                }
            }
        }
        let eta = step / (t as f64).sqrt();
        for (wj, gj) in w.iter_mut().zip(&g) {
            *wj -= eta * gj;
        }
        project_l2_ball(&mut w, norm_cap);
        let obj = hinge_objective(&w, s);
        if obj < best.0 {
            best = (obj, w.clone());
        }
    }
    Ok(Linear::new(best.1, norm_cap)?.into())
}

/// Candidate thresholds: below the smallest value, then midpoints of
/// consecutive distinct values.
fn thresholds(values: &mut [f64]) -> Vec<f64> {
    values.sort_by(f64::total_cmp);
    let mut out = vec![values[0] - 1.0];
    for w in values.windows(2) {
        if w[1] > w[0] {
            out.push(0.5 * (w[0] + w[1]));
        }
    }
    out
}

/// Stump with the lowest weighted error, ties broken by scan order.
fn best_stump(s: &LabeledSample, dist: &[f64], grid: &[Vec<f64>]) -> (Stump, f64) {
    let mut best = (
        Stump {
            feature: 0,
            threshold: grid[0][0],
            polarity: 1,
        },
        f64::INFINITY,
    );
    for (f, ts) in grid.iter().enumerate() {
        for &th in ts {
            // error of polarity +1; polarity −1 errs exactly where +1 is right
            let err: f64 = (0..s.len())
                .filter(|&i| (s.point(i)[f] > th) != (s.label(i) > 0.0))
                .map(|i| dist[i])
                .sum();
            for (pol, e) in [(1i8, err), (-1i8, 1.0 - err)] {
                if e < best.1 {
                    best = (
                        Stump {
                            feature: f,
                            threshold: th,
                            polarity: pol,
                        },
                        e,
                    );
                }
            }
        }
    }
    best
}

fn train_boost(s: &LabeledSample, rounds: usize) -> Result<Hypothesis> {
    if rounds == 0 {
        return Err(Error::Input("boosting needs at least one round".into()));
    }
    let m = s.len();
    let grid: Vec<Vec<f64>> = (0..s.dim())
        .map(|f| thresholds(&mut s.points().iter().map(|x| x[f]).collect::<Vec<_>>()))
        .collect();
    let mut dist = vec![1.0 / m as f64; m];
    let mut stumps = Vec::new();
    let mut alphas = Vec::new();
    for _ in 0..rounds {
        let (stump, err) = best_stump(s, &dist, &grid);
        if err >= 0.5 && !stumps.is_empty() {
            break;
        }
        let e = err.clamp(1e-12, 1.0 - 1e-12);
        let a = 0.5 * ((1.0 - e) / e).ln();
        stumps.push(stump);
        alphas.push(a.max(1e-12));
        let mut z = 0.0;
        for (i, d) in dist.iter_mut().enumerate() {
            *d *= (-a * s.label(i) * stump.eval(s.point(i))).exp();
            z += *d;
        }
        dist.iter_mut().for_each(|d| *d /= z);
        if err <= 1e-12 {
            break;
        }
    }
    let total: f64 = alphas.iter().sum();
    let weights = alphas.iter().map(|a| a / total).collect();
    Ok(Ensemble::new(weights, stumps)?.into())
}

#[allow(clippy::too_many_arguments)]
fn train_mlp(
    s: &LabeledSample,
    width: usize,
    iterations: usize,
    step: f64,
    cap: f64,
    init_scale: f64,
    seed: u64,
) -> Result<Hypothesis> {
    if width == 0 || !(step > 0.0) || !(cap > 0.0) {
        return Err(Error::Input("tiny-mlp needs width ≥ 1, step > 0 and row_l1_cap > 0".into()));
    }
    let d = s.dim();
    let mut rng = substream(seed, &[0x4D4C_50]);
    let mut hidden: Vec<Vec<f64>> = (0..width)
        .map(|_| (0..=d).map(|_| init_scale * (2.0 * rng.random::<f64>() - 1.0)).collect())
        .collect();
    let mut out: Vec<f64> = (0..=width)
        .map(|_| init_scale * (2.0 * rng.random::<f64>() - 1.0))
        .collect();
    let m = s.len() as f64;
    let act = Activation::Tanh;
    for _ in 0..iterations {
        let mut gh = vec![vec![0.0; d + 1]; width];
        let mut go = vec![0.0; width + 1];
        for i in 0..s.len() {
            let x = s.point(i);
            let y = s.label(i);
            let h: Vec<f64> = hidden
                .iter()
                .map(|r| act.apply(dot(&r[..d], x) + r[d]))
                .collect();
            let f = dot(&out[..width], &h) + out[width];
            // d/df log(1 + e^{−yf}) = −y σ(−yf)
            let dl = -y / (1.0 + (y * f).exp()) / m;
            for j in 0..width {
                go[j] += dl * h[j];
                let dz = dl * out[j] * act.derivative_from_output(h[j]);
                for k in 0..d {
                    gh[j][k] += dz * x[k];
                }
                gh[j][d] += dz;
            }
            go[width] += dl;
        }
        for (r, g) in hidden.iter_mut().zip(&gh) {
            for (w, gw) in r.iter_mut().zip(g) {
                *w -= step * gw;
            }
            project_l1_ball(r, cap);
        }
        for (w, gw) in out.iter_mut().zip(&go) {
            *w -= step * gw;
        }
        project_l1_ball(&mut out, cap);
    }
    Ok(Ffnn::new(vec![hidden, vec![out]], act, cap)?.into())
}
