use thiserror::Error;

/// Errors produced by the sampler library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid {kind} parameters: {reason}")]
    InvalidParameter { kind: &'static str, reason: String },

    #[error("probability {0} is outside the open interval (0, 1)")]
    Domain(f64),

    #[error("argument is NaN")]
    NotANumber,

    #[error("sample is empty")]
    EmptySample,

    /// A problem document or problem definition is malformed. `field` names the
    /// offending entry, e.g. `distributions[2].params` or `k`.
    #[error("{field}: {message}")]
    Spec { field: String, message: String },

    #[error("N = {n} exceeds the region cap of {cap} (3^N is about {estimate:.3e} assignments)")]
    Capacity { n: usize, cap: usize, estimate: f64 },

    #[error("infeasible problem: P(A<Y<B) = 0 under the given bounds")]
    Infeasible,

    #[error("rejection sampling gave up after {attempts} attempts without a draw inside the bounds")]
    BudgetExhausted { attempts: u64 },
}

impl Error {
    pub(crate) fn spec(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Spec {
            field: field.into(),
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
