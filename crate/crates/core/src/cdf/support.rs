use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Closed interval `[lo, hi]` carrying the mass of a distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 2]", into = "[f64; 2]")]
pub struct SupportInterval {
    lo: f64,
    hi: f64,
}

impl SupportInterval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(Error::Domain(format!("support [{lo}, {hi}] is not finite")));
        }
        if lo > hi {
            return Err(Error::Domain(format!("support [{lo}, {hi}] has lo > hi")));
        }
        Ok(Self { lo, hi })
    }

    /// Single-point support `[v, v]`.
    pub fn point(v: f64) -> Self {
        Self { lo: v, hi: v }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, v: f64) -> bool {
        v >= self.lo && v <= self.hi
    }

    /// Tolerance used when comparing breakpoints on this support.
    pub fn tolerance(&self) -> f64 {
        1e-12 * self.width().max(1.0)
    }

    /// Image under `v -> scale * v + shift` with `scale > 0`.
    pub fn push_affine(&self, scale: f64, shift: f64) -> Self {
        Self {
            lo: scale * self.lo + shift,
            hi: scale * self.hi + shift,
        }
    }

    /// Smallest interval containing both.
    pub fn hull(&self, other: &Self) -> Self {
        Self {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }
}

impl TryFrom<[f64; 2]> for SupportInterval {
    type Error = Error;

    fn try_from(v: [f64; 2]) -> Result<Self> {
        Self::new(v[0], v[1])
    }
}

impl From<SupportInterval> for [f64; 2] {
    fn from(s: SupportInterval) -> Self {
        [s.lo, s.hi]
    }
}
