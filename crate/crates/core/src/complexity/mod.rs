//! Capacity measures of finite pools: covers, dichotomies, Rademacher
//! averages, the peeling partition, and closed-form class formulas.

pub mod cover;
pub mod dichotomy;
pub mod estimate;
pub mod formulas;
pub mod matrix;
pub mod peeling;
pub mod rademacher;
pub mod shatter;
pub mod upper;

pub use cover::{covering_number, covering_number_l2, covering_number_linf, CoverMode, Metric};
pub use dichotomy::count_dichotomies;
pub use estimate::{BucketTerm, ComplexityEstimate, Method};
pub use formulas::{
    cover_log_bound_from_fat, fat_dim_formula, worst_case_rademacher, FatDimParams, FAT_COVER_CONSTANT,
};
pub use matrix::{LossMatrix, RangeTag};
pub use peeling::{peel, peeling_complexity, PeelingPartition};
pub use rademacher::{rademacher_exact, rademacher_mc};
pub use shatter::fat_shattering_exact;
pub use upper::{rm_upper_dichotomy, rm_upper_dudley, rm_upper_smooth};
