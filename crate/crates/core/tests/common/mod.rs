#![allow(dead_code)]

use ostrunc::oracle;
use ostrunc::{DistributionSpec, Problem, RandomSource};

pub const FIVE_DISTRIBUTIONS: &str = r#"{
    "distributions": [
        {"kind": "cauchy", "params": [5, 1]},
        {"kind": "normal", "params": [6, 2]},
        {"kind": "logistic", "params": [3, 2]},
        {"kind": "weibull", "params": [10, 1.5]},
        {"kind": "uniform", "params": [-5, 20]}
    ],
    "k": 3,
    "bounds": {"lower": 3, "upper": 8}
}"#;

/// Two Uniform(0,1) variables, k = 1, bounds (0.5, 0.8): P(A<Y<B) = 0.21.
pub const UNIFORM_PAIR: &str = r#"{
    "distributions": [
        {"kind": "uniform", "params": [0, 1]},
        {"kind": "uniform", "params": [0, 1]}
    ],
    "k": 1,
    "bounds": {"lower": 0.5, "upper": 0.8}
}"#;

pub fn five() -> Problem {
    Problem::from_json(FIVE_DISTRIBUTIONS).unwrap()
}

pub fn uniform_pair() -> Problem {
    Problem::from_json(UNIFORM_PAIR).unwrap()
}

fn between(rng: &mut RandomSource, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.next_uniform()
}

pub fn random_distribution(rng: &mut RandomSource) -> DistributionSpec {
    let loc = between(rng, -5.0, 5.0);
    let scale = between(rng, 0.2, 3.0);
    match (rng.next_uniform() * 5.0) as usize {
        0 => DistributionSpec::cauchy(loc, scale),
        1 => DistributionSpec::normal(loc, scale),
        2 => DistributionSpec::logistic(loc, scale),
        3 => DistributionSpec::weibull(between(rng, 0.5, 10.0), between(rng, 0.5, 4.0)),
        _ => DistributionSpec::uniform(loc - 5.0, loc + between(rng, 0.5, 10.0)),
    }
    .unwrap()
}

/// A random problem with `1 <= N <= max_n`, random `k`, and bounds drawn
/// from the variables' own quantiles, so the interval holds some mass.
/// Each side is unbounded with probability 1/10.
pub fn random_problem(rng: &mut RandomSource, max_n: usize) -> Problem {
    loop {
        let n = 1 + (rng.next_uniform() * max_n as f64) as usize;
        let dists: Vec<_> = (0..n).map(|_| random_distribution(rng)).collect();
        let k = 1 + (rng.next_uniform() * n as f64) as usize;
        let mut ends = [0.0; 2];
        for e in &mut ends {
            let d = dists[(rng.next_uniform() * n as f64) as usize];
            *e = d.quantile(between(rng, 0.02, 0.98)).unwrap();
        }
        ends.sort_by(f64::total_cmp);
        let lower = if rng.next_uniform() < 0.1 {
            f64::NEG_INFINITY
        } else {
            ends[0]
        };
        let upper = if rng.next_uniform() < 0.1 {
            f64::INFINITY
        } else {
            ends[1]
        };
        let Ok(p) = Problem::new(dists, k, lower, upper) else {
            continue;
        };
        if oracle::bounded_mass(&p).unwrap() > 1e-6 {
            return p;
        }
    }
}
