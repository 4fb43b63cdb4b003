//! Margin transforms `φ` and the `ρ`-truncation `β_ρ`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TransformKind {
    /// `1{u < ρ}`
    Step,
    /// `1{u < ρ/2}`
    HalfStep,
    /// `1` below zero, `1 - u/ρ` on `[0, ρ]`, `0` above.
    Ramp,
    /// `1` below zero, `(1 + cos(πu/ρ))/2` on `[0, ρ]`, `0` above.
    SmoothCos,
}

/// A non-increasing surrogate squeezed between `1{u < 0}` and `1{u < ρ}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarginTransform {
    kind: TransformKind,
    rho: f64,
}

impl MarginTransform {
    pub fn new(kind: TransformKind, rho: f64) -> Result<Self> {
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(Error::input(format!("margin transform needs rho > 0, got {rho}")));
        }
        Ok(MarginTransform { kind, rho })
    }

    pub fn step(rho: f64) -> Result<Self> {
        Self::new(TransformKind::Step, rho)
    }

    pub fn half_step(rho: f64) -> Result<Self> {
        Self::new(TransformKind::HalfStep, rho)
    }

    pub fn ramp(rho: f64) -> Result<Self> {
        Self::new(TransformKind::Ramp, rho)
    }

    pub fn smooth_cos(rho: f64) -> Result<Self> {
        Self::new(TransformKind::SmoothCos, rho)
    }

    pub fn kind(&self) -> TransformKind {
        self.kind
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// `φ(u)` evaluated at a margin `u = y h(x)`.
    pub fn apply(&self, u: f64) -> f64 {
        let rho = self.rho;
        match self.kind {
            TransformKind::Step => indicator(u < rho),
            TransformKind::HalfStep => indicator(u < rho / 2.0),
            TransformKind::Ramp => {
                if u < 0.0 {
                    1.0
                } else if u <= rho {
                    1.0 - u / rho
                } else {
                    0.0
                }
            }
            TransformKind::SmoothCos => {
                if u < 0.0 {
                    1.0
                } else if u <= rho {
                    (1.0 + (PI * u / rho).cos()) / 2.0
                } else {
                    0.0
                }
            }
        }
    }

    /// Whether the transform only takes values in `{0, 1}`.
    pub fn is_binary(&self) -> bool {
        matches!(self.kind, TransformKind::Step | TransformKind::HalfStep)
    }
}

/// Zero-one loss on a margin. Ties count as errors: `1{u ≤ 0}`.
pub fn zero_one(u: f64) -> f64 {
    indicator(u <= 0.0)
}

fn indicator(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

/// The `ρ`-truncation `β_ρ(u) = max(u, -ρ)·1{u ≤ 0} + min(u, ρ)·1{u ≥ 0}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationSpec {
    rho: f64,
}

impl TruncationSpec {
    pub fn new(rho: f64) -> Result<Self> {
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(Error::input(format!("truncation needs rho > 0, got {rho}")));
        }
        Ok(TruncationSpec { rho })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn apply(&self, u: f64) -> f64 {
        // At u = 0 both branches contribute 0, so the sum is exactly the clamp.
        let neg = if u <= 0.0 { u.max(-self.rho) } else { 0.0 };
        let pos = if u >= 0.0 { u.min(self.rho) } else { 0.0 };
        neg + pos
    }
}
