//! One-dimensional CDFs on compact supports.

use std::borrow::Cow;

use crate::error::{Error, Result};

mod json;
mod piecewise;
mod stepped;
mod support;
mod w1;

pub use json::AnyCdf;
pub use piecewise::{PiecewiseCdf, Segment, SegmentKind};
pub use stepped::SteppedCdf;
pub use support::SupportInterval;
pub use w1::w1_distance;

/// Common interface of right-continuous CDFs with compact support.
pub trait Cdf {
    fn support(&self) -> SupportInterval;

    /// `P(X <= t)`.
    fn eval(&self, t: f64) -> f64;

    /// `P(X < t)`, the left limit at `t`.
    fn eval_left(&self, t: f64) -> f64;

    /// `inf { t : F(t) > y }` for `0 <= y < 1`.
    fn generalized_inverse(&self, y: f64) -> Result<f64>;

    /// `inf { t : F(t) >= y }` for `0 < y <= 1`.
    fn left_inverse(&self, y: f64) -> Result<f64>;

    /// `int_lo^hi F(s) ds`.
    fn integral(&self, lo: f64, hi: f64) -> f64;

    /// Sorted points where the formula of the CDF may change.
    fn breakpoints(&self) -> Vec<f64>;

    /// Smallest `t` with `F(t) = 1`.
    fn saturation_point(&self) -> f64;

    fn as_piecewise(&self) -> Cow<'_, PiecewiseCdf>;
}

pub(crate) fn check_level_open(y: f64) -> Result<()> {
    if (0.0..1.0).contains(&y) {
        Ok(())
    } else {
        Err(Error::Domain(format!("level {y} outside [0, 1)")))
    }
}

pub(crate) fn check_level_closed(y: f64) -> Result<()> {
    if y > 0.0 && y <= 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("level {y} outside (0, 1]")))
    }
}

/// Reflection `rc[1 - F(a + b - t)]` of any CDF on `[a, b]`.
pub fn reflect<F: Cdf + ?Sized>(f: &F, support: SupportInterval) -> Result<PiecewiseCdf> {
    f.as_piecewise().reflect(support)
}
