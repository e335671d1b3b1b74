//! Pass/fail statistical gates comparing the two samplers with each other and
//! with the analytic truncated CDF. All gates use `alpha = 0.01`.

use std::fmt;

use super::ks::{dkw_bound, ks_against_cdf, ks_two_sample, Ecdf};
use crate::error::Result;
use crate::oracle;
use crate::problem::Problem;
use crate::sampler::{Method, Sampler};

pub const GATE_ALPHA: f64 = 0.01;

/// Mean rejection attempts must be within this relative distance of 1/f.
pub const REJECTION_COST_TOLERANCE: f64 = 0.20;

/// Tolerance for the region-volume sum against the oracle's bounded mass.
pub const VOLUME_IDENTITY_TOLERANCE: f64 = 1e-10;

/// Seed offset for the rejection stream so the two samples are independent.
pub const REJECTION_SEED_OFFSET: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    pub name: &'static str,
    pub statistic: f64,
    pub threshold: f64,
    pub passed: bool,
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<24} {:>14.6e} {:>14.6e}  {}",
            self.name,
            self.statistic,
            self.threshold,
            if self.passed { "PASS" } else { "FAIL" }
        )
    }
}

#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub n: usize,
    pub acceptance_probability: f64,
    pub gates: Vec<Gate>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.gates.iter().all(|g| g.passed)
    }
}

/// Draws `n` values with each method and evaluates every gate.
pub fn validate(sampler: &Sampler, n: usize, seed: u64) -> Result<ValidationReport> {
    let p: &Problem = sampler.problem();
    let (mapped, _) = sampler.draw_values(n, seed, Method::Mapped)?;
    let (rejected, attempts) = sampler.draw_values(n, seed.wrapping_add(REJECTION_SEED_OFFSET), Method::Rejection)?;

    let violations = mapped.iter().filter(|&&y| !(p.lower() < y && y < p.upper())).count();

    let acceptance = sampler.table().acceptance_probability();
    let mass = oracle::bounded_mass(p)?;

    let mapped = Ecdf::new(mapped)?;
    let rejected = Ecdf::new(rejected)?;
    let two = ks_two_sample(&mapped, &rejected);
    let dkw = dkw_bound(n, GATE_ALPHA);
    let d_mapped = ks_against_cdf(&mapped, p)?;
    let d_rejected = ks_against_cdf(&rejected, p)?;
    let mean_attempts = attempts as f64 / n as f64;
    let cost_error = (mean_attempts * acceptance - 1.0).abs();

    let gates = vec![
        Gate {
            name: "bounds",
            statistic: violations as f64,
            threshold: 0.0,
            passed: violations == 0,
        },
        Gate {
            name: "volume_identity",
            statistic: (acceptance - mass).abs(),
            threshold: VOLUME_IDENTITY_TOLERANCE,
            passed: (acceptance - mass).abs() <= VOLUME_IDENTITY_TOLERANCE,
        },
        Gate {
            name: "ks_mapped_vs_rejection",
            statistic: two.statistic,
            threshold: two.critical01,
            passed: two.passes(),
        },
        Gate {
            name: "dkw_mapped_vs_oracle",
            statistic: d_mapped,
            threshold: dkw,
            passed: d_mapped <= dkw,
        },
        Gate {
            name: "dkw_rejection_vs_oracle",
            statistic: d_rejected,
            threshold: dkw,
            passed: d_rejected <= dkw,
        },
        Gate {
            name: "rejection_cost",
            statistic: cost_error,
            threshold: REJECTION_COST_TOLERANCE,
            passed: cost_error <= REJECTION_COST_TOLERANCE,
        },
    ];
    Ok(ValidationReport {
        n,
        acceptance_probability: acceptance,
        gates,
    })
}
