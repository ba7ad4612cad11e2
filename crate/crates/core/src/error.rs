use thiserror::Error;

/// Errors raised by the numerical and simulation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of a function.
    #[error("domain error: {0}")]
    Domain(String),

    /// A parameter or configuration value violates its documented constraints.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The sample cannot produce a finite statistic (for example all values equal).
    #[error("degenerate sample: {0}")]
    DegenerateSample(String),

    #[error("empty sample")]
    EmptySample,

    /// Adaptive quadrature ran out of its subdivision budget before meeting the tolerance.
    #[error(
        "quadrature did not converge: estimated error {estimated_error:e} exceeds tolerance \
         {tolerance:e} after {intervals} intervals"
    )]
    NonConvergence {
        estimated_error: f64,
        tolerance: f64,
        intervals: usize,
    },

    /// A null sample was generated under a configuration that does not match the request.
    #[error("configuration mismatch: {0}")]
    ConfigMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
