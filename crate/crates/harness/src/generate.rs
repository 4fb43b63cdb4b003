//! Sample generation.

use marginbound::distribution::SyntheticDistribution;
use marginbound::rng::substream;
use marginbound::{LabeledSample, Result};
use rand::Rng;
use rand_distr::{Distribution, Normal};

/// `m` i.i.d. draws from `dist`, reproducible per `(dist, m, seed)`.
pub fn generate(dist: &SyntheticDistribution, m: usize, seed: u64) -> Result<LabeledSample> {
    dist.sample(m, seed)
}

/// Four Gaussian blobs at `(±1, ±1)` labeled by the sign of `x₁x₂`.
/// Each point picks a corner uniformly and adds isotropic noise of scale `jitter`.
pub fn xor_layout(m: usize, jitter: f64, seed: u64) -> Result<LabeledSample> {
    let mut rng = substream(seed, &[0x584F_52]);
    let noise = Normal::new(0.0, jitter.max(0.0)).map_err(|e| marginbound::Error::Input(e.to_string()))?;
    let mut points = Vec::with_capacity(m);
    let mut labels = Vec::with_capacity(m);
    for _ in 0..m {
        let a: f64 = if rng.random::<bool>() { 1.0 } else { -1.0 };
        let b: f64 = if rng.random::<bool>() { 1.0 } else { -1.0 };
        points.push(vec![a + noise.sample(&mut rng), b + noise.sample(&mut rng)]);
        labels.push(if a * b > 0.0 { 1 } else { -1 });
    }
    LabeledSample::new(points, labels, seed, "xor-layout")
}
