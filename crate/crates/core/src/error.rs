use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain where the operation is defined.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("empty sample: at least one value is required")]
    EmptySample,

    /// A CDF failed its structural checks (ordering, masses, monotonicity).
    #[error("invalid CDF: {0}")]
    InvalidCdf(String),

    #[error("invalid concentration constants: ln(C/beta) = {0} must be positive")]
    InvalidConstants(f64),

    /// The radius ratio on the p = n/2 branch depends on the unknown constants.
    #[error("radius ratio is not constant-free on the p = n/2 branch")]
    UnsupportedBranch,

    /// The requested radius leaves no informative envelope.
    #[error("uninformative band: rho = {rho} is not below the admissible bound {bound}")]
    UninformativeBand { rho: f64, bound: f64 },

    #[error("characteristic is not upstream-directed: qdot({state}) = {qdot} <= 0")]
    NotUpstream { state: f64, qdot: f64 },

    #[error("characteristic integration failed: {0}")]
    Trace(String),

    #[error("linearity required: this operation is only defined for linear dynamics")]
    LinearityRequired,

    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
