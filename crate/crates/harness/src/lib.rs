//! Experiments around the margin bounds: data generation, training,
//! Monte-Carlo coverage campaigns, tightness tables and numeric checks of
//! the auxiliary lemmas.

pub mod boundmin;
pub mod config;
pub mod generate;
pub mod lemmas;
pub mod tightness;
pub mod train;
pub mod validate;

pub use config::{apply_overrides, ExperimentConfig};
pub use validate::{validate_bounds, ValidityReport};
