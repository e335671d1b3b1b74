//! Problem definition: N distributions, the order index k and the bounds
//! (A, B), plus the JSON problem document that describes one.

use serde::Deserialize;

use crate::distributions::{DistributionKind, DistributionSpec};
use crate::error::{Error, Result};

/// A bounded k-th order statistic problem.
///
/// `a[i] = F_i(A)` and `b[i] = F_i(B)` are the bounds carried into the unit
/// hypercube. `k` is 1-based: `k = 1` is the minimum and `k = N` the maximum.
#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    dists: Vec<DistributionSpec>,
    k: usize,
    lower: f64,
    upper: f64,
    a: Vec<f64>,
    b: Vec<f64>,
}

impl Problem {
    pub fn new(dists: Vec<DistributionSpec>, k: usize, lower: f64, upper: f64) -> Result<Self> {
        if dists.is_empty() {
            return Err(Error::spec("distributions", "at least one distribution is required"));
        }
        if k == 0 || k > dists.len() {
            return Err(Error::spec(
                "k",
                format!("k out of range: k = {k} but N = {}", dists.len()),
            ));
        }
        if lower.is_nan() || upper.is_nan() {
            return Err(Error::spec("bounds", "bounds must not be NaN"));
        }
        if lower >= upper {
            return Err(Error::spec(
                "bounds",
                format!("lower bound {lower} must be below upper bound {upper}"),
            ));
        }
        if lower.next_up() >= upper {
            return Err(Error::spec(
                "bounds",
                "no representable value lies strictly between the bounds",
            ));
        }
        let a = dists.iter().map(|d| d.cdf_unchecked(lower)).collect();
        let b = dists.iter().map(|d| d.cdf_unchecked(upper)).collect();
        Ok(Problem {
            dists,
            k,
            lower,
            upper,
            a,
            b,
        })
    }

    /// Same distributions and `k`, different bounds.
    pub fn with_bounds(&self, lower: f64, upper: f64) -> Result<Self> {
        Problem::new(self.dists.clone(), self.k, lower, upper)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        parse_spec(text)
    }

    pub fn n(&self) -> usize {
        self.dists.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn dists(&self) -> &[DistributionSpec] {
        &self.dists
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    /// Serializes back to the problem document format.
    pub fn to_json(&self) -> String {
        let dists: Vec<serde_json::Value> = self
            .dists
            .iter()
            .map(|d| serde_json::json!({ "kind": d.kind().name(), "params": d.params() }))
            .collect();
        serde_json::json!({
            "distributions": dists,
            "k": self.k,
            "bounds": { "lower": bound_to_json(self.lower), "upper": bound_to_json(self.upper) },
        })
        .to_string()
    }
}

fn bound_to_json(v: f64) -> serde_json::Value {
    if v == f64::INFINITY {
        "inf".into()
    } else if v == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        v.into()
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    distributions: Vec<DistEntry>,
    k: serde_json::Number,
    bounds: Bounds,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DistEntry {
    kind: String,
    params: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Bounds {
    lower: BoundValue,
    upper: BoundValue,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum BoundValue {
    Number(f64),
    Sentinel(String),
}

impl BoundValue {
    fn resolve(&self, field: &str) -> Result<f64> {
        match self {
            BoundValue::Number(v) => Ok(*v),
            BoundValue::Sentinel(s) => match s.as_str() {
                "-inf" => Ok(f64::NEG_INFINITY),
                "inf" | "+inf" => Ok(f64::INFINITY),
                other => Err(Error::spec(
                    field,
                    format!("expected a number, \"-inf\" or \"inf\", got {other:?}"),
                )),
            },
        }
    }
}

/// Parses a problem document:
///
/// ```json
/// {"distributions": [{"kind": "cauchy", "params": [5, 1]}],
///  "k": 1,
///  "bounds": {"lower": 3, "upper": "inf"}}
/// ```
pub fn parse_spec(text: &str) -> Result<Problem> {
    let doc: Document = serde_json::from_str(text).map_err(|e| Error::spec("document", e.to_string()))?;

    let mut dists = Vec::with_capacity(doc.distributions.len());
    for (i, entry) in doc.distributions.iter().enumerate() {
        let kind = DistributionKind::from_name(&entry.kind).ok_or_else(|| {
            Error::spec(
                format!("distributions[{i}].kind"),
                format!("unknown kind {:?}", entry.kind),
            )
        })?;
        let dist = DistributionSpec::new(kind, &entry.params)
            .map_err(|e| Error::spec(format!("distributions[{i}].params"), e.to_string()))?;
        dists.push(dist);
    }

    let k = doc
        .k
        .as_u64()
        .and_then(|k| usize::try_from(k).ok())
        .ok_or_else(|| Error::spec("k", format!("k out of range: {}", doc.k)))?;

    let lower = doc.bounds.lower.resolve("bounds.lower")?;
    let upper = doc.bounds.upper.resolve("bounds.upper")?;
    Problem::new(dists, k, lower, upper)
}
