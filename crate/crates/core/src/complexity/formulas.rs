//! Closed-form capacity formulas for linear predictors, convex ensembles and
//! feed-forward networks, plus the fat-shattering-to-cover conversion.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Universal constant of the fat-shattering covering bound.
pub const FAT_COVER_CONSTANT: f64 = 17.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "kebab-case")]
pub enum FatDimParams {
    /// `{x ↦ w·x : ‖w‖₂ ≤ 1, ‖x‖₂ ≤ radius}`
    Linear { radius: f64, rho: f64 },
    /// Convex combinations of a base class of VC dimension `vc_dim`.
    Ensemble { vc_dim: f64, rho: f64, c: f64 },
    /// Depth-`depth` networks with row ℓ1 norms ≤ `radius`, `mu`-Lipschitz
    /// activations and `inputs` input coordinates.
    FfnnFat {
        radius: f64,
        mu: f64,
        depth: u32,
        rho: f64,
        inputs: f64,
        c: f64,
    },
    /// Depth-`depth` networks with spectral norms ≤ `radius` and
    /// `‖Wᵀ‖_{2,1} ≤ r21·‖W‖₂`, `lipschitz`-Lipschitz activations.
    FfnnSpectral {
        radius: f64,
        r21: f64,
        depth: u32,
        rho: f64,
        lipschitz: f64,
    },
}

impl FatDimParams {
    pub fn validate(&self) -> Result<()> {
        let positive: &[(&str, f64)] = match self {
            FatDimParams::Linear { radius, rho } => &[("radius", *radius), ("rho", *rho)],
            FatDimParams::Ensemble { vc_dim, rho, c } => &[("vc_dim", *vc_dim), ("rho", *rho), ("c", *c)],
            FatDimParams::FfnnFat {
                radius,
                mu,
                rho,
                inputs,
                c,
                ..
            } => &[
                ("radius", *radius),
                ("mu", *mu),
                ("rho", *rho),
                ("inputs", *inputs),
                ("c", *c),
            ],
            FatDimParams::FfnnSpectral {
                radius,
                r21,
                rho,
                lipschitz,
                ..
            } => &[
                ("radius", *radius),
                ("r21", *r21),
                ("rho", *rho),
                ("lipschitz", *lipschitz),
            ],
        };
        for (name, v) in positive {
            if !(*v > 0.0 && v.is_finite()) {
                return Err(Error::input(format!("{name} must be positive, got {v}")));
            }
        }
        if let FatDimParams::FfnnFat { depth: 0, .. } | FatDimParams::FfnnSpectral { depth: 0, .. } = self {
            return Err(Error::input("network depth must be at least 1"));
        }
        Ok(())
    }

    pub fn rho(&self) -> f64 {
        match self {
            FatDimParams::Linear { rho, .. }
            | FatDimParams::Ensemble { rho, .. }
            | FatDimParams::FfnnFat { rho, .. }
            | FatDimParams::FfnnSpectral { rho, .. } => *rho,
        }
    }

    /// Same class at a different scale.
    pub fn with_rho(mut self, new_rho: f64) -> Self {
        match &mut self {
            FatDimParams::Linear { rho, .. }
            | FatDimParams::Ensemble { rho, .. }
            | FatDimParams::FfnnFat { rho, .. }
            | FatDimParams::FfnnSpectral { rho, .. } => *rho = new_rho,
        }
        self
    }
}

/// Upper bound on `fat_ρ` for the class (a real; ceil it for an integer dimension).
pub fn fat_dim_formula(params: &FatDimParams) -> Result<f64> {
    params.validate()?;
    match *params {
        FatDimParams::Linear { radius, rho } => Ok((radius / rho).powi(2)),
        FatDimParams::Ensemble { vc_dim, rho, c } => {
            if rho >= 1.0 {
                return Err(Error::domain(format!(
                    "ensemble fat-shattering formula needs rho < 1 (log(1/rho) > 0), got {rho}"
                )));
            }
            Ok(c * (vc_dim / rho).powi(2) * (1.0 / rho).ln())
        }
        FatDimParams::FfnnFat {
            radius,
            mu,
            depth,
            rho,
            inputs,
            c,
        } => {
            let d = f64::from(depth);
            Ok(c.powf(d * d) * (radius * mu).powf(d * (d + 1.0)) / rho.powf(2.0 * d) * inputs.ln())
        }
        FatDimParams::FfnnSpectral { .. } => Err(Error::capability(
            "spectral-norm networks have a Rademacher formula, not a fat-shattering one",
        )),
    }
}

/// Closed-form upper bound on the worst-case empirical Rademacher complexity
/// `R̂_m^max`. The spectral-network bound drops its polylog factor (set to 1).
pub fn worst_case_rademacher(params: &FatDimParams, m: f64) -> Result<f64> {
    params.validate()?;
    if !(m >= 1.0) {
        return Err(Error::input(format!("sample size must be at least 1, got {m}")));
    }
    match *params {
        FatDimParams::Linear { radius, .. } => Ok(radius / m.sqrt()),
        FatDimParams::FfnnSpectral {
            radius,
            r21,
            depth,
            rho,
            lipschitz,
        } => {
            let d = f64::from(depth);
            Ok(d.powf(1.5) * radius * r21 / (rho.powf(d) * m.sqrt()) * (radius * lipschitz).powf(d))
        }
        _ => Err(Error::capability(
            "worst-case Rademacher formula is available for linear and spectral-norm classes only",
        )),
    }
}

/// `1 + d log₂(2c²m) log₂(2cem/d)`: log of the maximal `ℓ∞` cover implied by
/// a fat-shattering dimension `d`.
pub fn cover_log_bound_from_fat(d: f64, m: f64, c: f64) -> Result<f64> {
    if !(d >= 1.0) || !(m >= 1.0) || !(c > 0.0) {
        return Err(Error::input(format!(
            "need d ≥ 1, m ≥ 1 and c > 0, got d={d}, m={m}, c={c}"
        )));
    }
    let inner = 2.0 * c * std::f64::consts::E * m / d;
    if !(inner > 1.0) {
        return Err(Error::domain(format!(
            "log₂(2cem/d) needs 2cem/d > 1, got {inner}"
        )));
    }
    Ok(1.0 + d * (2.0 * c * c * m).log2() * inner.log2())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fat_dim_examples() {
        assert_eq!(fat_dim_formula(&FatDimParams::Linear { radius: 1.0, rho: 0.5 }).unwrap(), 4.0);
        let ens = fat_dim_formula(&FatDimParams::Ensemble { vc_dim: 10.0, rho: 0.1, c: 1.0 }).unwrap();
        // mpmath: 1e4·ln 10
        assert!((ens - 23_025.850_929_940_457).abs() <= 1e-12 * ens);
        let nn = FatDimParams::FfnnFat {
            radius: 1.0,
            mu: 1.0,
            depth: 1,
            rho: 1.0,
            inputs: std::f64::consts::E,
            c: 1.0,
        };
        assert!((fat_dim_formula(&nn).unwrap() - 1.0).abs() < 1e-15);
        assert!(matches!(
            fat_dim_formula(&FatDimParams::Ensemble { vc_dim: 3.0, rho: 1.0, c: 1.0 }),
            Err(Error::Domain(_))
        ));
        assert!(fat_dim_formula(&FatDimParams::Linear { radius: -1.0, rho: 0.5 }).is_err());
    }

    #[test]
    fn worst_case_examples() {
        let lin = |r| FatDimParams::Linear { radius: r, rho: 1.0 };
        assert!((worst_case_rademacher(&lin(1.0), 100.0).unwrap() - 0.1).abs() < 1e-15);
        assert!((worst_case_rademacher(&lin(2.0), 400.0).unwrap() - 0.1).abs() < 1e-15);
        let spec = FatDimParams::FfnnSpectral {
            radius: 1.0,
            r21: 1.0,
            depth: 1,
            rho: 1.0,
            lipschitz: 1.0,
        };
        assert!((worst_case_rademacher(&spec, 100.0).unwrap() - 0.1).abs() < 1e-15);
        let ens = FatDimParams::Ensemble { vc_dim: 3.0, rho: 0.5, c: 1.0 };
        assert!(matches!(worst_case_rademacher(&ens, 100.0), Err(Error::Capability(_))));
    }

    #[test]
    fn cover_from_fat_examples() {
        assert_eq!(FAT_COVER_CONSTANT, 17.0);
        let v = cover_log_bound_from_fat(1.0, 1.0, FAT_COVER_CONSTANT).unwrap();
        // mpmath: 1 + log2(578)·log2(34e)
        assert!((v - 60.913_713_263_624_13).abs() < 1e-12);
        let mut prev = 0.0;
        for m in (1..200).map(|i| i as f64 * 5.0) {
            let v = cover_log_bound_from_fat(4.0, m, FAT_COVER_CONSTANT).unwrap();
            assert!(v > prev);
            prev = v;
        }
        let d = 2.0 * 17.0 * std::f64::consts::E * 3.0;
        assert!(matches!(
            cover_log_bound_from_fat(d, 3.0, 17.0),
            Err(Error::Domain(_))
        ));
    }
}
