//! Bound evaluation from an empirical term, a complexity term and
//! confidence parameters.

mod families;
mod report;
mod solve;

pub use families::{
    bound_cov_alpha, bound_cov_alpha2, bound_cov_fat, bound_cov_uniform_rho, bound_rad, bound_rad_all_alpha,
    bound_rad_smooth, bound_unbounded, bound_unbounded_uniform_rho, m_exponent, peeling_b, uniform_rho_addend,
};
pub use report::{Alternate, BoundParams, BoundReport, Family, Solver, Term, REPORT_CSV_HEADER, REPORT_SCHEMA};
pub use solve::{explicit_lemma_d1, gamma_factor, solve_relative};
