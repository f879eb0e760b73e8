use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    /// Power split outside `0 < b < 0.5`.
    #[error("power split violates a > b: b = {b} must lie in (0, 0.5)")]
    PowerSplit { b: f64 },

    #[error("argument out of domain: {0}")]
    Domain(String),

    /// The multinomial expansion cannot be represented with exact integer weights.
    #[error("expansion too large: {0}")]
    ExpansionTooLarge(String),

    #[error("quadrature did not converge: estimate {estimate:e}, error estimate {error:e}")]
    NoConvergence { estimate: f64, error: f64 },

    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
