use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The operation is not defined for the given claim distribution.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// An integral or moment generating function diverges.
    #[error("divergent: {0}")]
    Divergent(String),

    /// Heavy-tailed claims have no exponential moments.
    #[error("no adjustment coefficient exists for {0} claims")]
    NoAdjustmentCoefficient(&'static str),

    /// The net-profit condition fails, so the Lundberg equation has no positive root.
    #[error("no positive root: net-profit condition violated (retained mean {mean} >= retained premium {premium})")]
    NoPositiveRoot { mean: f64, premium: f64 },

    /// Engine or scenario configuration is unusable.
    #[error("configuration error: {0}")]
    Config(String),

    /// Input validation failed; each entry names the offending field.
    #[error("invalid input: {}", .0.join("; "))]
    Invalid(Vec<String>),
}

pub type Result<T> = std::result::Result<T, Error>;
