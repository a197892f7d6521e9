use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole of the Gamma function at z = {0}")]
    Pole(f64),

    #[error("argument outside the domain of {function}: {detail}")]
    Domain { function: &'static str, detail: String },

    #[error("non-finite input passed to {0}")]
    NonFinite(&'static str),

    #[error("{0} overflows the f64 range; use the exponentially scaled variant")]
    Overflow(&'static str),

    #[error("singular Jacobi parameter: (a+1)_{k} vanishes")]
    SingularParameter { k: usize },

    #[error("invalid parameter {name}: {detail}")]
    InvalidParameter { name: &'static str, detail: String },

    #[error(
        "evaluation budget of {budget} exhausted (best estimate {best:e}, error estimate {error_estimate:e})"
    )]
    BudgetExceeded {
        budget: usize,
        best: f64,
        error_estimate: f64,
    },

    #[error("coherent state truncation would exceed n_max cap {cap} (|z|^2 = {x})")]
    Truncation { cap: usize, x: f64 },

    #[error("loss of significance in {what}: {detail}")]
    LossOfSignificance { what: &'static str, detail: String },

    #[error("verification of {name} failed: residual {residual:e} > tolerance {tolerance:e}")]
    Verification {
        name: String,
        residual: f64,
        tolerance: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, detail: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        detail: detail.into(),
    }
}
