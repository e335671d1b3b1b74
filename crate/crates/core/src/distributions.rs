//! Continuous univariate distributions with exact CDF and quantile evaluation.
//!
//! Every kind here has a continuous, strictly increasing CDF on its support,
//! which is what the hypercube mapping relies on. Parameters are checked once
//! in the constructors; [`DistributionSpec::cdf`] and
//! [`DistributionSpec::quantile`] do no further validation beyond NaN/domain
//! checks on their argument.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;

use crate::error::{Error, Result};

const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// The supported distribution families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DistributionKind {
    /// params: `[location, scale]`
    Cauchy,
    /// params: `[mean, standard deviation]`
    Normal,
    /// params: `[location, scale]`
    Logistic,
    /// params: `[scale (lambda), shape (k)]`
    Weibull,
    /// params: `[low, high]`
    Uniform,
}

impl DistributionKind {
    pub const ALL: [DistributionKind; 5] = [
        DistributionKind::Cauchy,
        DistributionKind::Normal,
        DistributionKind::Logistic,
        DistributionKind::Weibull,
        DistributionKind::Uniform,
    ];

    /// Lower-case name used in problem documents.
    pub fn name(self) -> &'static str {
        match self {
            DistributionKind::Cauchy => "cauchy",
            DistributionKind::Normal => "normal",
            DistributionKind::Logistic => "logistic",
            DistributionKind::Weibull => "weibull",
            DistributionKind::Uniform => "uniform",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }
}

impl fmt::Display for DistributionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A validated, immutable continuous distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistributionSpec {
    kind: DistributionKind,
    params: [f64; 2],
}

impl DistributionSpec {
    /// Builds a distribution from a kind and its two parameters.
    pub fn new(kind: DistributionKind, params: &[f64]) -> Result<Self> {
        let invalid = |reason: String| Error::InvalidParameter {
            kind: kind.name(),
            reason,
        };
        let &[first, second] = params else {
            return Err(invalid(format!("expected 2 parameters, got {}", params.len())));
        };
        if !first.is_finite() || !second.is_finite() {
            return Err(invalid("parameters must be finite".into()));
        }
        match kind {
            DistributionKind::Cauchy | DistributionKind::Logistic if second <= 0.0 => {
                return Err(invalid(format!("scale must be > 0, got {second}")));
            }
            DistributionKind::Normal if second <= 0.0 => {
                return Err(invalid(format!("standard deviation must be > 0, got {second}")));
            }
            DistributionKind::Weibull if first <= 0.0 || second <= 0.0 => {
                return Err(invalid(format!(
                    "scale and shape must be > 0, got scale {first} and shape {second}"
                )));
            }
            DistributionKind::Uniform if second <= first => {
                return Err(invalid(format!("need low < high, got [{first}, {second}]")));
            }
            _ => {}
        }
        Ok(DistributionSpec {
            kind,
            params: [first, second],
        })
    }

    pub fn cauchy(location: f64, scale: f64) -> Result<Self> {
        Self::new(DistributionKind::Cauchy, &[location, scale])
    }

    pub fn normal(mean: f64, sd: f64) -> Result<Self> {
        Self::new(DistributionKind::Normal, &[mean, sd])
    }

    pub fn logistic(location: f64, scale: f64) -> Result<Self> {
        Self::new(DistributionKind::Logistic, &[location, scale])
    }

    pub fn weibull(scale: f64, shape: f64) -> Result<Self> {
        Self::new(DistributionKind::Weibull, &[scale, shape])
    }

    pub fn uniform(low: f64, high: f64) -> Result<Self> {
        Self::new(DistributionKind::Uniform, &[low, high])
    }

    pub fn kind(&self) -> DistributionKind {
        self.kind
    }

    pub fn params(&self) -> [f64; 2] {
        self.params
    }

    /// `F(x)`. Defined on the extended reals: `-inf` maps to 0 and `+inf` to 1.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        if x.is_nan() {
            return Err(Error::NotANumber);
        }
        Ok(self.cdf_unchecked(x))
    }

    /// `F^{-1}(p)` for `p` strictly inside (0, 1).
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if p.is_nan() {
            return Err(Error::NotANumber);
        }
        if p <= 0.0 || p >= 1.0 {
            return Err(Error::Domain(p));
        }
        Ok(self.quantile_unchecked(p))
    }

    pub(crate) fn cdf_unchecked(&self, x: f64) -> f64 {
        let [p0, p1] = self.params;
        match self.kind {
            DistributionKind::Cauchy => {
                // atan2 keeps relative accuracy in the lower tail where
                // 0.5 + atan(z)/pi would cancel.
                let z = (x - p0) / p1;
                (1.0f64).atan2(-z) / PI
            }
            DistributionKind::Normal => std_normal_cdf((x - p0) / p1),
            DistributionKind::Logistic => {
                let z = (x - p0) / p1;
                1.0 / (1.0 + (-z).exp())
            }
            DistributionKind::Weibull => {
                if x <= 0.0 {
                    0.0
                } else {
                    -(-(x / p0).powf(p1)).exp_m1()
                }
            }
            DistributionKind::Uniform => {
                if x <= p0 {
                    0.0
                } else if x >= p1 {
                    1.0
                } else {
                    (x - p0) / (p1 - p0)
                }
            }
        }
    }

    /// Caller guarantees `0 < p < 1`.
    pub(crate) fn quantile_unchecked(&self, p: f64) -> f64 {
        let [p0, p1] = self.params;
        match self.kind {
            DistributionKind::Cauchy => {
                // tan(pi (p - 1/2)) rewritten as -cot(pi p) so both tails stay
                // accurate; 1 - p is exact for p >= 1/2.
                if p < 0.5 {
                    p0 - p1 / (PI * p).tan()
                } else {
                    p0 + p1 / (PI * (1.0 - p)).tan()
                }
            }
            DistributionKind::Normal => p0 + p1 * std_normal_quantile(p),
            DistributionKind::Logistic => {
                let logit = if p < 0.5 {
                    (p / (1.0 - p)).ln()
                } else {
                    -((1.0 - p) / p).ln()
                };
                p0 + p1 * logit
            }
            DistributionKind::Weibull => p0 * (-(-p).ln_1p()).powf(1.0 / p1),
            DistributionKind::Uniform => {
                let x = p0 + p * (p1 - p0);
                x.clamp(p0, p1)
            }
        }
    }
}

impl fmt::Display for DistributionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({}, {})", self.kind, self.params[0], self.params[1])
    }
}

/// Standard normal CDF through the complementary error function.
pub fn std_normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z * FRAC_1_SQRT_2)
}

fn std_normal_pdf(z: f64) -> f64 {
    FRAC_1_SQRT_2PI * (-0.5 * z * z).exp()
}

/// Standard normal quantile: Wichura's AS241 (PPND16) followed by one Newton
/// step on the CDF. The upper half is evaluated through symmetry so the
/// Newton correction always works on a small, accurately representable tail
/// probability.
pub fn std_normal_quantile(p: f64) -> f64 {
    if p > 0.5 {
        -lower_tail_quantile(1.0 - p)
    } else {
        lower_tail_quantile(p)
    }
}

fn lower_tail_quantile(p: f64) -> f64 {
    let x = ppnd16(p);
    let density = std_normal_pdf(x);
    if density > 0.0 && density.is_finite() {
        x - (std_normal_cdf(x) - p) / density
    } else {
        x
    }
}

#[allow(clippy::excessive_precision, clippy::unreadable_literal)]
fn ppnd16(p: f64) -> f64 {
    const SPLIT1: f64 = 0.425;
    const SPLIT2: f64 = 5.0;
    const CONST1: f64 = 0.180625;
    const CONST2: f64 = 1.6;

    const A: [f64; 8] = [
        3.3871328727963666080e0,
        1.3314166789178437745e+2,
        1.9715909503065514427e+3,
        1.3731693765509461125e+4,
        4.5921953931549871457e+4,
        6.7265770927008700853e+4,
        3.3430575583588128105e+4,
        2.5090809287301226727e+3,
    ];
    const B: [f64; 8] = [
        1.0,
        4.2313330701600911252e+1,
        6.8718700749205790830e+2,
        5.3941960214247511077e+3,
        2.1213794301586595867e+4,
        3.9307895800092710610e+4,
        2.8729085735721942674e+4,
        5.2264952788528545610e+3,
    ];
    const C: [f64; 8] = [
        1.42343711074968357734e0,
        4.63033784615654529590e0,
        5.76949722146069140550e0,
        3.64784832476320460504e0,
        1.27045825245236838258e0,
        2.41780725177450611770e-1,
        2.27238449892691845833e-2,
        7.74545014278341407640e-4,
    ];
    const D: [f64; 8] = [
        1.0,
        2.05319162663775882187e0,
        1.67638483018380384940e0,
        6.89767334985100004550e-1,
        1.48103976427480074590e-1,
        1.51986665636164571966e-2,
        5.47593808499534494600e-4,
        1.05075007164441684324e-9,
    ];
    const E: [f64; 8] = [
        6.65790464350110377720e0,
        5.46378491116411436990e0,
        1.78482653991729133580e0,
        2.96560571828504891230e-1,
        2.65321895265761230930e-2,
        1.24266094738807843860e-3,
        2.71155556874348757815e-5,
        2.01033439929228813265e-7,
    ];
    const F: [f64; 8] = [
        1.0,
        5.99832206555887937690e-1,
        1.36929880922735805310e-1,
        1.48753612908506148525e-2,
        7.86869131145613259100e-4,
        1.84631831751005468180e-5,
        1.42151175831644588870e-7,
        2.04426310338993978564e-15,
    ];

    fn poly(c: &[f64; 8], x: f64) -> f64 {
        c.iter().rev().fold(0.0, |acc, &ci| acc * x + ci)
    }

    let q = p - 0.5;
    if q.abs() <= SPLIT1 {
        let r = CONST1 - q * q;
        return q * poly(&A, r) / poly(&B, r);
    }
    let r = if q < 0.0 { p } else { 1.0 - p };
    let r = (-r.ln()).sqrt();
    let x = if r <= SPLIT2 {
        let r = r - CONST2;
        poly(&C, r) / poly(&D, r)
    } else {
        let r = r - SPLIT2;
        poly(&E, r) / poly(&F, r)
    };
    if q < 0.0 {
        -x
    } else {
        x
    }
}
