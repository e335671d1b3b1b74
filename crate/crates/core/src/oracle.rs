//! Analytic ground truth for the samplers.
//!
//! `Y <= y` exactly when at least `k` of the `X_i` are `<= y`. The indicators
//! `1{X_i <= y}` are independent Bernoulli(`F_i(y)`) trials, so the count
//! follows a Poisson-binomial law and `F_Y(y)` is its upper tail. Nothing
//! here reuses the region enumeration or the sampler; only the distribution
//! CDFs are shared.

use crate::error::{Error, Result};
use crate::problem::Problem;
use crate::regions::{Region, Slot};

/// Largest N accepted by [`brute_force_regions`].
pub const BRUTE_FORCE_MAX_N: usize = 8;

/// Distribution of the number of successes among independent, non-identical
/// Bernoulli trials.
#[derive(Debug, Clone, PartialEq)]
pub struct PoissonBinomial {
    probs: Vec<f64>,
    count_dist: Vec<f64>,
}

impl PoissonBinomial {
    /// O(N^2) convolution, one trial at a time.
    pub fn new(probs: &[f64]) -> Self {
        let mut q = vec![0.0; probs.len() + 1];
        q[0] = 1.0;
        for (i, &p) in probs.iter().enumerate() {
            for j in (1..=i + 1).rev() {
                q[j] = q[j] * (1.0 - p) + q[j - 1] * p;
            }
            q[0] *= 1.0 - p;
        }
        PoissonBinomial {
            probs: probs.to_vec(),
            count_dist: q,
        }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// `q[j] = P(exactly j successes)`, `j = 0..=N`.
    pub fn count_dist(&self) -> &[f64] {
        &self.count_dist
    }

    /// `P(at least k successes)`.
    pub fn at_least(&self, k: usize) -> f64 {
        // Sum whichever tail is shorter.
        if k == 0 {
            return 1.0;
        }
        if k > self.probs.len() {
            return 0.0;
        }
        if 2 * k > self.probs.len() {
            self.count_dist[k..].iter().sum()
        } else {
            1.0 - self.count_dist[..k].iter().sum::<f64>()
        }
    }
}

/// `F_Y(y)` for the k-th smallest of the problem's variates, ignoring bounds.
pub fn order_stat_cdf(p: &Problem, y: f64) -> Result<f64> {
    let probs = p.dists().iter().map(|d| d.cdf(y)).collect::<Result<Vec<f64>>>()?;
    Ok(PoissonBinomial::new(&probs).at_least(p.k()).clamp(0.0, 1.0))
}

/// `P(A < Y < B)` computed from the order-statistic CDF.
pub fn bounded_mass(p: &Problem) -> Result<f64> {
    Ok(order_stat_cdf(p, p.upper())? - order_stat_cdf(p, p.lower())?)
}

/// CDF of `Y` conditioned on `A < Y < B`.
pub fn truncated_cdf(p: &Problem, y: f64) -> Result<f64> {
    let at_lower = order_stat_cdf(p, p.lower())?;
    let mass = order_stat_cdf(p, p.upper())? - at_lower;
    if mass <= 0.0 {
        return Err(Error::Infeasible);
    }
    Ok(((order_stat_cdf(p, y)? - at_lower) / mass).clamp(0.0, 1.0))
}

/// Every assignment in `{Below, Mid, Above}^N`, filtered directly by the
/// order-statistic constraints. Output order matches counting in base 3 with
/// coordinate 1 as the most significant digit.
pub fn brute_force_regions(p: &Problem) -> Result<Vec<Region>> {
    let n = p.n();
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::Capacity {
            n,
            cap: BRUTE_FORCE_MAX_N,
            estimate: 3f64.powi(n as i32),
        });
    }
    let (a, b, k) = (p.a(), p.b(), p.k());
    let total = 3usize.pow(n as u32);
    let mut out = Vec::new();
    for code in 0..total {
        let mut digits = vec![0usize; n];
        let mut rest = code;
        for d in digits.iter_mut().rev() {
            *d = rest % 3;
            rest /= 3;
        }
        let below = digits.iter().filter(|&&d| d == 0).count();
        let mid = digits.iter().filter(|&&d| d == 1).count();
        // Below: X_i < A, Mid: A < X_i < B, Above: X_i > B.
        if below > k - 1 || below + mid < k || mid == 0 {
            continue;
        }
        let mut volume = 1.0;
        for (j, &d) in digits.iter().enumerate() {
            volume *= match d {
                0 => a[j],
                1 => b[j] - a[j],
                _ => 1.0 - b[j],
            };
        }
        let assignment = digits
            .iter()
            .map(|&d| [Slot::Below, Slot::Mid, Slot::Above][d])
            .collect();
        out.push(Region { assignment, volume });
    }
    Ok(out)
}
