//! Draws from the bounded k-th order statistic.
//!
//! The mapped method takes one uniform point in `[0, 1)^N`, picks the region
//! whose slab contains `u_N`, stretches every coordinate onto that region's
//! intervals and applies the inverse CDFs. Each draw consumes exactly `N`
//! uniforms and always lands inside the bounds. The rejection method is the
//! baseline: plain inverse-transform draws, discarded until `A < Y < B`.

use std::fmt;
use std::str::FromStr;

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::error::{Error, Result};
use crate::problem::Problem;
use crate::regions::{RegionTable, Slot, DEFAULT_MAX_N};

/// Default number of rejection attempts allowed for a single draw.
pub const DEFAULT_REJECTION_BUDGET: u64 = 100_000_000;

/// Seedable uniform source on `[0, 1)` with 53-bit resolution.
#[derive(Debug, Clone)]
pub struct RandomSource(Xoshiro256PlusPlus);

impl RandomSource {
    pub fn seed_from_u64(seed: u64) -> Self {
        RandomSource(Xoshiro256PlusPlus::seed_from_u64(seed))
    }

    #[inline]
    pub fn next_uniform(&mut self) -> f64 {
        const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
        (self.0.next_u64() >> 11) as f64 * SCALE
    }

    pub fn fill_uniform(&mut self, out: &mut [f64]) {
        for u in out {
            *u = self.next_uniform();
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Mapped,
    Rejection,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Mapped => "mapped",
            Method::Rejection => "rejection",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "mapped" => Ok(Method::Mapped),
            "rejection" => Ok(Method::Rejection),
            other => Err(format!("unknown method {other:?} (expected mapped or rejection)")),
        }
    }
}

/// One draw with its full trace.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleRecord {
    /// Source point in `[0, 1)^N`. For rejection draws, the accepted point.
    pub u: Vec<f64>,
    /// 0-based region index; `None` for rejection draws.
    pub region: Option<usize>,
    /// Mapped point in the restricted cube (equal to `u` for rejection draws).
    pub u_prime: Vec<f64>,
    pub x: Vec<f64>,
    /// The k-th smallest of `x`.
    pub y: f64,
    /// Attempts spent on this draw (always 1 for the mapped method).
    pub attempts: u64,
}

/// Reusable buffers so the sampling loops do not allocate.
#[derive(Debug, Clone, Default)]
pub struct Scratch {
    u: Vec<f64>,
    u_prime: Vec<f64>,
    x: Vec<f64>,
    select: Vec<f64>,
}

impl Scratch {
    pub fn new(n: usize) -> Self {
        Scratch {
            u: vec![0.0; n],
            u_prime: vec![0.0; n],
            x: vec![0.0; n],
            select: vec![0.0; n],
        }
    }
}

/// Clamps `v` into the open interval `(lo, hi)`, one representable step
/// inside each end point.
#[inline]
fn clamp_open(v: f64, lo: f64, hi: f64) -> f64 {
    let inner_lo = lo.next_up();
    let inner_hi = hi.next_down();
    if inner_lo > inner_hi {
        // No representable value strictly inside; both end points are
        // adjacent floats.
        return lo + 0.5 * (hi - lo);
    }
    v.max(inner_lo).min(inner_hi)
}

/// k-th smallest (1-based `k`) using a partial selection.
#[inline]
fn kth_smallest(values: &mut [f64], k: usize) -> f64 {
    let (_, kth, _) = values.select_nth_unstable_by(k - 1, f64::total_cmp);
    *kth
}

/// A problem with its region table, ready to draw.
#[derive(Debug, Clone)]
pub struct Sampler {
    problem: Problem,
    table: RegionTable,
    rejection_budget: u64,
}

impl Sampler {
    pub fn new(problem: Problem) -> Result<Self> {
        Self::with_cap(problem, DEFAULT_MAX_N)
    }

    pub fn with_cap(problem: Problem, max_n: usize) -> Result<Self> {
        let table = RegionTable::build_with_cap(&problem, max_n)?;
        Ok(Sampler {
            problem,
            table,
            rejection_budget: DEFAULT_REJECTION_BUDGET,
        })
    }

    pub fn with_rejection_budget(mut self, budget: u64) -> Self {
        self.rejection_budget = budget.max(1);
        self
    }

    pub fn problem(&self) -> &Problem {
        &self.problem
    }

    pub fn table(&self) -> &RegionTable {
        &self.table
    }

    pub fn rejection_budget(&self) -> u64 {
        self.rejection_budget
    }

    pub fn scratch(&self) -> Scratch {
        Scratch::new(self.problem.n())
    }

    /// Maps a source point `u` in `[0, 1)^N` into the restricted cube.
    /// Writes the image to `u_prime` and returns the 0-based region index.
    pub fn map_point(&self, u: &[f64], u_prime: &mut [f64]) -> usize {
        let n = self.problem.n();
        assert_eq!(u.len(), n);
        assert_eq!(u_prime.len(), n);
        let (a, b) = (self.problem.a(), self.problem.b());

        let selector = u[n - 1];
        let s = self.table.locate(selector);
        let assignment = self.table.assignment(s);
        let (start, width) = self.table.slab(s);
        // Position of the selector within its slab, rescaled to [0, 1).
        let rescaled = ((selector - start) / width).clamp(0.0, 1.0);

        for j in 0..n {
            let (lo, hi) = assignment[j].interval(a[j], b[j]);
            let t = if j + 1 == n { rescaled } else { u[j] };
            u_prime[j] = clamp_open(lo + (hi - lo) * t, lo, hi);
        }
        s
    }

    /// Inverse CDFs followed by a clamp of each variate to the side of the
    /// bounds its slot requires.
    #[inline]
    fn variates(&self, assignment: &[Slot], u_prime: &[f64], x: &mut [f64]) {
        let (lower, upper) = (self.problem.lower(), self.problem.upper());
        for (j, dist) in self.problem.dists().iter().enumerate() {
            let v = dist.quantile_unchecked(u_prime[j]);
            x[j] = match assignment[j] {
                Slot::Below => v.min(lower.next_down()),
                Slot::Mid => v.max(lower.next_up()).min(upper.next_down()),
                Slot::Above => v.max(upper.next_up()),
            };
        }
    }

    #[inline]
    fn draw_into(&self, rng: &mut RandomSource, scratch: &mut Scratch) -> (usize, f64) {
        rng.fill_uniform(&mut scratch.u);
        let s = self.map_point(&scratch.u, &mut scratch.u_prime);
        self.variates(self.table.assignment(s), &scratch.u_prime, &mut scratch.x);
        scratch.select.copy_from_slice(&scratch.x);
        (s, kth_smallest(&mut scratch.select, self.problem.k()))
    }

    /// One mapped draw, returning only `y`.
    #[inline]
    pub fn draw_value(&self, rng: &mut RandomSource, scratch: &mut Scratch) -> f64 {
        self.draw_into(rng, scratch).1
    }

    /// One mapped draw with its trace.
    pub fn draw(&self, rng: &mut RandomSource) -> SampleRecord {
        let mut scratch = self.scratch();
        let (s, y) = self.draw_into(rng, &mut scratch);
        SampleRecord {
            u: scratch.u,
            region: Some(s),
            u_prime: scratch.u_prime,
            x: scratch.x,
            y,
            attempts: 1,
        }
    }

    /// One rejection draw; returns `y` and the number of attempts used.
    pub fn rejection_value(&self, rng: &mut RandomSource, scratch: &mut Scratch) -> Result<(f64, u64)> {
        let (lower, upper) = (self.problem.lower(), self.problem.upper());
        let k = self.problem.k();
        for attempt in 1..=self.rejection_budget {
            rng.fill_uniform(&mut scratch.u);
            for (j, dist) in self.problem.dists().iter().enumerate() {
                // A zero coordinate is the left end of [0, 1); nudge it into
                // the quantile's open domain.
                let p = scratch.u[j].max(f64::MIN_POSITIVE);
                scratch.x[j] = dist.quantile_unchecked(p);
            }
            scratch.select.copy_from_slice(&scratch.x);
            let y = kth_smallest(&mut scratch.select, k);
            if lower < y && y < upper {
                return Ok((y, attempt));
            }
        }
        Err(Error::BudgetExhausted {
            attempts: self.rejection_budget,
        })
    }

    /// One rejection draw with its trace.
    pub fn rejection_draw(&self, rng: &mut RandomSource) -> Result<(SampleRecord, u64)> {
        let mut scratch = self.scratch();
        let (y, attempts) = self.rejection_value(rng, &mut scratch)?;
        let record = SampleRecord {
            u_prime: scratch.u.clone(),
            u: scratch.u,
            region: None,
            x: scratch.x,
            y,
            attempts,
        };
        Ok((record, attempts))
    }

    /// `n` traced draws from a fresh stream seeded with `seed`.
    pub fn draw_many(&self, n: usize, seed: u64, method: Method) -> Result<Vec<SampleRecord>> {
        let mut rng = RandomSource::seed_from_u64(seed);
        (0..n)
            .map(|_| match method {
                Method::Mapped => Ok(self.draw(&mut rng)),
                Method::Rejection => self.rejection_draw(&mut rng).map(|(r, _)| r),
            })
            .collect()
    }

    /// `n` values of `y` plus the total attempts spent (equal to `n` for the
    /// mapped method).
    pub fn draw_values(&self, n: usize, seed: u64, method: Method) -> Result<(Vec<f64>, u64)> {
        let mut rng = RandomSource::seed_from_u64(seed);
        let mut scratch = self.scratch();
        let mut values = Vec::with_capacity(n);
        let mut attempts = 0u64;
        for _ in 0..n {
            match method {
                Method::Mapped => {
                    values.push(self.draw_value(&mut rng, &mut scratch));
                    attempts += 1;
                }
                Method::Rejection => {
                    let (y, used) = self.rejection_value(&mut rng, &mut scratch)?;
                    values.push(y);
                    attempts += used;
                }
            }
        }
        Ok((values, attempts))
    }
}

/// Builds the region table for `problem` and draws `n` traced samples.
pub fn draw_many(problem: &Problem, n: usize, seed: u64, method: Method) -> Result<Vec<SampleRecord>> {
    Sampler::new(problem.clone())?.draw_many(n, seed, method)
}
