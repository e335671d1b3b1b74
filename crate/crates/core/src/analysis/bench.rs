//! Timing comparison of the mapped and rejection samplers.
//!
//! Each cell (bounds, n, method) is timed around the draw loop only, after a
//! short warmup, and the best of several repetitions is kept. Region table
//! construction is timed separately, once per bounds.

use std::fmt;
use std::hint::black_box;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::oracle;
use crate::problem::Problem;
use crate::sampler::{Method, RandomSource, Sampler, DEFAULT_REJECTION_BUDGET};

pub const DEFAULT_AREAS: [f64; 6] = [0.9, 0.5, 0.1, 0.05, 0.01, 0.001];
pub const DEFAULT_NS: [usize; 5] = [1, 10, 100, 1000, 10_000];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BenchStatus {
    Ok,
    /// The rejection budget ran out before `n` draws completed.
    Incomplete,
    /// The bounds hold no probability mass.
    Infeasible,
}

impl BenchStatus {
    pub fn name(self) -> &'static str {
        match self {
            BenchStatus::Ok => "ok",
            BenchStatus::Incomplete => "incomplete",
            BenchStatus::Infeasible => "infeasible",
        }
    }
}

impl fmt::Display for BenchStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub bounds_label: String,
    /// `P(A < Y < B)` for the row's bounds.
    pub pdf_area: f64,
    pub n: usize,
    pub method: Method,
    pub total_seconds: f64,
    pub per_draw_seconds: f64,
    /// Mean attempts per draw; 1 for the mapped method.
    pub attempts_mean: f64,
    pub status: BenchStatus,
    /// Sum of the drawn values, for checking that timing runs are reproducible.
    pub checksum: f64,
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub repetitions: usize,
    pub warmup: usize,
    pub rejection_budget: u64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            repetitions: 3,
            warmup: 100,
            rejection_budget: DEFAULT_REJECTION_BUDGET,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    /// Region table construction time per bounds label.
    pub table_build_seconds: Vec<(String, f64)>,
}

pub fn bounds_label(lower: f64, upper: f64) -> String {
    format!("[{lower:.6},{upper:.6}]")
}

/// Solves `F_Y(y) = target` by bisection on the oracle CDF.
fn order_stat_quantile(p: &Problem, target: f64) -> Result<f64> {
    let cdf = |y: f64| oracle::order_stat_cdf(p, y);
    let (mut lo, mut hi) = (-1.0f64, 1.0f64);
    while cdf(lo)? > target {
        lo *= 2.0;
        if lo < -1e300 {
            return Err(Error::Infeasible);
        }
    }
    while cdf(hi)? < target {
        hi *= 2.0;
        if hi > 1e300 {
            return Err(Error::Infeasible);
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if cdf(mid)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Bounds centred on the median of the untruncated order statistic that
/// enclose probability `area`.
pub fn bounds_for_area(p: &Problem, area: f64) -> Result<(f64, f64)> {
    if !(area > 0.0 && area < 1.0) {
        return Err(Error::Domain(area));
    }
    let lower = order_stat_quantile(p, 0.5 - 0.5 * area)?;
    let upper = order_stat_quantile(p, 0.5 + 0.5 * area)?;
    Ok((lower, upper))
}

struct Timed {
    seconds: f64,
    attempts: u64,
    completed: usize,
    checksum: f64,
    exhausted: bool,
}

fn run_cell(sampler: &Sampler, n: usize, seed: u64, method: Method, warmup: usize) -> Timed {
    let mut rng = RandomSource::seed_from_u64(seed);
    let mut scratch = sampler.scratch();
    for _ in 0..warmup {
        let y = match method {
            Method::Mapped => sampler.draw_value(&mut rng, &mut scratch),
            Method::Rejection => match sampler.rejection_value(&mut rng, &mut scratch) {
                Ok((y, _)) => y,
                Err(_) => break,
            },
        };
        black_box(y);
    }

    let mut checksum = 0.0;
    let mut attempts = 0u64;
    let mut completed = 0usize;
    let mut exhausted = false;
    let start = Instant::now();
    match method {
        Method::Mapped => {
            for _ in 0..n {
                checksum += black_box(sampler.draw_value(&mut rng, &mut scratch));
            }
            attempts = n as u64;
            completed = n;
        }
        Method::Rejection => {
            for _ in 0..n {
                match sampler.rejection_value(&mut rng, &mut scratch) {
                    Ok((y, used)) => {
                        checksum += black_box(y);
                        attempts += used;
                        completed += 1;
                    }
                    Err(_) => {
                        attempts += sampler.rejection_budget();
                        exhausted = true;
                        break;
                    }
                }
            }
        }
    }
    Timed {
        seconds: start.elapsed().as_secs_f64(),
        attempts,
        completed,
        checksum,
        exhausted,
    }
}

/// Times both methods for every bounds pair and draw count.
pub fn bench_compare(
    p: &Problem,
    bounds: &[(f64, f64)],
    ns: &[usize],
    seed: u64,
    config: &BenchConfig,
) -> Result<BenchReport> {
    let mut report = BenchReport::default();
    for &(lower, upper) in bounds {
        let label = bounds_label(lower, upper);
        let problem = p.with_bounds(lower, upper)?;

        let start = Instant::now();
        let sampler = match Sampler::new(problem) {
            Ok(s) => s.with_rejection_budget(config.rejection_budget),
            Err(Error::Infeasible) => {
                for &n in ns {
                    for method in [Method::Mapped, Method::Rejection] {
                        report.rows.push(BenchRow {
                            bounds_label: label.clone(),
                            pdf_area: 0.0,
                            n,
                            method,
                            total_seconds: 0.0,
                            per_draw_seconds: 0.0,
                            attempts_mean: 0.0,
                            status: BenchStatus::Infeasible,
                            checksum: 0.0,
                        });
                    }
                }
                continue;
            }
            Err(e) => return Err(e),
        };
        report
            .table_build_seconds
            .push((label.clone(), start.elapsed().as_secs_f64()));
        let area = sampler.table().acceptance_probability();

        for &n in ns {
            for method in [Method::Mapped, Method::Rejection] {
                let mut best: Option<Timed> = None;
                for _ in 0..config.repetitions.max(1) {
                    let t = run_cell(&sampler, n, seed, method, config.warmup);
                    let exhausted = t.exhausted;
                    if best.as_ref().is_none_or(|b| t.seconds < b.seconds) {
                        best = Some(t);
                    }
                    if exhausted {
                        // Another repetition would exhaust the budget again.
                        break;
                    }
                }
                let t = best.expect("at least one repetition");
                report.rows.push(BenchRow {
                    bounds_label: label.clone(),
                    pdf_area: area,
                    n,
                    method,
                    total_seconds: t.seconds,
                    per_draw_seconds: t.seconds / n.max(1) as f64,
                    attempts_mean: if t.completed > 0 {
                        t.attempts as f64 / t.completed as f64
                    } else {
                        t.attempts as f64
                    },
                    status: if t.exhausted {
                        BenchStatus::Incomplete
                    } else {
                        BenchStatus::Ok
                    },
                    checksum: t.checksum,
                });
            }
        }
    }
    Ok(report)
}
