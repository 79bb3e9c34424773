//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors raised by quantization, the Fock backend and the stochastic driver.
#[derive(Debug, Error)]
pub enum Error {
    /// A monomial with a negative power was supplied.
    #[error("negative power in monomial ({dag}, {ann})")]
    NegativePower { dag: i64, ann: i64 },

    /// The Lindbladian violates a structural requirement.
    #[error("malformed Lindbladian: {0}")]
    MalformedLindbladian(String),

    /// The degree-3 table was asked to handle a higher-degree system.
    #[error("table quantization supports degree <= 3, got degree {0}")]
    DegreeTooHigh(i32),

    /// Catalog lookup failed.
    #[error("unknown catalog system `{0}`")]
    UnknownSystem(String),

    /// Bad catalog parameters.
    #[error("invalid parameters for `{name}`: {reason}")]
    InvalidParams { name: String, reason: String },

    /// Inputs of mismatched dimension.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// Generic invalid-argument error for numeric options.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The Liouvillian kernel is not one-dimensional.
    #[error("degenerate steady state: {0} singular values below threshold")]
    DegenerateSteadyState(usize),

    /// Steady-state observables did not settle while increasing the truncation.
    #[error("truncation did not converge up to N = {ceiling} (last change {last_change:.3e}); steady state is likely non-normalizable")]
    TruncationDivergence { ceiling: usize, last_change: f64 },

    /// Adaptive step size collapsed.
    #[error("step size underflow at t = {t}")]
    StepUnderflow { t: f64 },

    /// Trace or Hermiticity was lost during integration.
    #[error("integration unstable at step {step}: {reason}")]
    Unstable { step: usize, reason: String },

    /// Spike statistics need at least three spikes.
    #[error("too few spikes: found {0}, need at least 3")]
    TooFewSpikes(usize),

    /// JSON (de)serialization failure.
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
