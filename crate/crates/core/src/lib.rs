//! Wasserstein ambiguity sets for the random inputs of hyperbolic conservation
//! laws, propagated through space-time along characteristics.
//!
//! The crate is organized bottom-up:
//!
//! - [`cdf`]: exact stepped and piecewise CDFs, inverses, reflection and W1.
//! - [`ambiguity`]: finite-sample radii and input ambiguity balls.
//! - [`envelope`]: upper/lower CDF envelopes (ambiguity bands).
//! - [`propagation`]: characteristic solvers for the CDF and W1 equations.
//! - [`scenario`]: the advection-depletion example with a Monte Carlo oracle.
//! - [`cli`]: the `ambiflow` command line front end.

pub mod ambiguity;
pub mod cdf;
pub mod cli;
pub mod envelope;
pub mod error;
pub mod numeric;
pub mod propagation;
pub mod scenario;

pub use cdf::{w1_distance, AnyCdf, Cdf, PiecewiseCdf, Segment, SegmentKind, SteppedCdf, SupportInterval};
pub use error::{Error, Result};
