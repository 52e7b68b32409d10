//! Error type shared across the crate.
//!
//! Divergence of a norm is *not* an error (see [`crate::norms::LpNorm`]);
//! the variants here are genuine domain or usage violations.

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// The block-spacing exponent must satisfy `theta > 1` so that the
    /// breakpoints accumulate at a finite right endpoint.
    #[error("theta must be a finite number > 1 (got {theta})")]
    ThetaOutOfRange { theta: f64 },

    /// The ramp exponent must be positive and finite.
    #[error("sigma must be a finite number > 0 (got {sigma})")]
    SigmaOutOfRange { sigma: f64 },

    /// Tolerances must be positive and finite.
    #[error("tolerance must be a finite number > 0 (got {tol})")]
    BadTolerance { tol: f64 },

    /// Integrability index out of range for the requested operation.
    #[error("rho must be > 0 (got {rho})")]
    BadRho { rho: f64 },

    /// A first-difference step outside the admissible range.
    #[error("step h must satisfy 0 < h <= {max} (got {h})")]
    BadStep { h: f64, max: f64 },

    /// The point lies in the untabulated tail `[a_ncap, a_inf)`: the block
    /// table is capped, and values there are below `bound` in magnitude.
    #[error("xi = {xi} lies in the untabulated tail; values there are bounded by {bound:e}")]
    TruncationSaturated { xi: f64, bound: f64 },

    /// Derivative requested at (or within snap tolerance of) a transition
    /// point, where only one-sided derivatives exist.
    #[error("not differentiable at the transition point xi = {xi}")]
    NotDifferentiable { xi: f64 },

    /// Two-resolution disagreement in a grid quadrature exceeded tolerance.
    #[error("quadrature grid too coarse: refinement moved the value by {delta:e} (tol {tol:e})")]
    GridTooCoarse { delta: f64, tol: f64 },

    /// An exponent fit needs a minimum number of samples.
    #[error("exponent fit needs at least {min} samples, got {got}")]
    InsufficientSamples { min: usize, got: usize },

    /// Predicted scaling exponent requested outside its validity region.
    #[error("predicted exponent out of validity: {reason}")]
    OutOfValidity { reason: String },

    /// A parameter-selection inequality failed; the message names it.
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    /// Operation not implemented for this dimension.
    #[error("dimension d = {d} unsupported here (supported: {supported})")]
    UnsupportedDimension { d: usize, supported: &'static str },

    /// Malformed experiment configuration.
    #[error("bad config: {0}")]
    BadConfig(String),

    /// Failure writing report or CSV artifacts.
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
