//! Statistical validation and timing harness.

pub mod bench;
pub mod ks;
pub mod validate;

pub use bench::{bench_compare, bounds_for_area, BenchConfig, BenchReport, BenchRow, BenchStatus};
pub use ks::{
    dkw_bound, kolmogorov_sf, ks_against, ks_against_cdf, ks_pvalue, ks_two_sample, two_sample_critical, Ecdf,
    KsTwoSample, KS_C_ALPHA_01,
};
pub use validate::{validate, Gate, ValidationReport};
