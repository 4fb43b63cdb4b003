//! Relative-deviation margin bounds.
//!
//! Margin transforms and hypotheses, empirical risk, capacity estimates on
//! finite pools, and evaluation of the bound families built on them.

pub mod bounds;
pub mod complexity;
pub mod distribution;
pub mod error;
pub mod hypothesis;
pub mod numfmt;
pub mod risk;
pub mod rng;
pub mod sample;
pub mod transform;

pub use error::{Error, Result};
pub use hypothesis::{Hypothesis, Query};
pub use sample::LabeledSample;
pub use transform::{MarginTransform, TransformKind, TruncationSpec};
