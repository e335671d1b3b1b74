//! Empirical CDFs and Kolmogorov-Smirnov style distances.

use crate::error::{Error, Result};
use crate::oracle;
use crate::problem::Problem;

/// Asymptotic two-sample KS coefficient `c(alpha)` at `alpha = 0.01`.
pub const KS_C_ALPHA_01: f64 = 1.628;

/// A sorted sample.
#[derive(Debug, Clone, PartialEq)]
pub struct Ecdf {
    values: Vec<f64>,
}

impl Ecdf {
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySample);
        }
        if values.iter().any(|v| v.is_nan()) {
            return Err(Error::NotANumber);
        }
        values.sort_unstable_by(f64::total_cmp);
        Ok(Ecdf { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Fraction of the sample `<= x`.
    pub fn eval(&self, x: f64) -> f64 {
        self.values.partition_point(|&v| v <= x) as f64 / self.values.len() as f64
    }
}

/// Two-sample KS statistic with its `alpha = 0.01` critical value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsTwoSample {
    pub statistic: f64,
    pub critical01: f64,
}

impl KsTwoSample {
    pub fn passes(&self) -> bool {
        self.statistic < self.critical01
    }
}

/// `c(alpha) * sqrt((n + m) / (n m))`.
pub fn two_sample_critical(n: usize, m: usize, c_alpha: f64) -> f64 {
    let (n, m) = (n as f64, m as f64);
    c_alpha * ((n + m) / (n * m)).sqrt()
}

pub fn ks_two_sample(x: &Ecdf, y: &Ecdf) -> KsTwoSample {
    let (xs, ys) = (x.values(), y.values());
    let (n, m) = (xs.len(), ys.len());
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < n && j < m {
        // Step past every copy of the smaller value in both samples so ties
        // are compared after both ECDFs have jumped.
        let v = xs[i].min(ys[j]);
        while i < n && xs[i] <= v {
            i += 1;
        }
        while j < m && ys[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / n as f64 - j as f64 / m as f64).abs());
    }
    KsTwoSample {
        statistic: d,
        critical01: two_sample_critical(n, m, KS_C_ALPHA_01),
    }
}

/// `sup |ECDF - F|` over the sample points, for a continuous `F`.
pub fn ks_against<F: FnMut(f64) -> f64>(x: &Ecdf, mut cdf: F) -> f64 {
    let n = x.len() as f64;
    x.values()
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let f = cdf(v);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

/// One-sample distance between the sample and the oracle's truncated CDF.
pub fn ks_against_cdf(x: &Ecdf, p: &Problem) -> Result<f64> {
    // Surface infeasibility before scanning.
    oracle::truncated_cdf(p, p.lower())?;
    let mut err = None;
    let d = ks_against(x, |v| match oracle::truncated_cdf(p, v) {
        Ok(f) => f,
        Err(e) => {
            err = Some(e);
            f64::NAN
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(d),
    }
}

/// Dvoretzky-Kiefer-Wolfowitz band half-width: `P(sup|ECDF - F| > eps) <= alpha`.
pub fn dkw_bound(n: usize, alpha: f64) -> f64 {
    ((2.0 / alpha).ln() / (2.0 * n as f64)).sqrt()
}

/// Survival function of the Kolmogorov distribution, `P(K > t)`.
pub fn kolmogorov_sf(t: f64) -> f64 {
    if t <= 0.0 {
        return 1.0;
    }
    if t < 0.2 {
        // The alternating series converges slowly here and the value is 1 to
        // double precision.
        return 1.0;
    }
    let mut sum = 0.0;
    for j in 1..=100 {
        let jf = j as f64;
        let term = (-2.0 * jf * jf * t * t).exp();
        sum += if j % 2 == 1 { term } else { -term };
        if term < 1e-18 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Asymptotic p-value of a one-sample KS statistic `d` from `n` points, with
/// Stephens' small-sample correction.
pub fn ks_pvalue(d: f64, n: usize) -> f64 {
    let rn = (n as f64).sqrt();
    kolmogorov_sf((rn + 0.12 + 0.11 / rn) * d)
}
