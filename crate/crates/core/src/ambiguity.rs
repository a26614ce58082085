//! Finite-sample ambiguity radii and pointwise input ambiguity balls.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cdf::{SteppedCdf, SupportInterval};
use crate::error::{Error, Result};

/// How the concentration constants enter the radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum RadiusMode {
    /// User-supplied concentration constants `C` and `c`.
    Absolute {
        #[serde(rename = "C")]
        big_c: f64,
        #[serde(rename = "c")]
        small_c: f64,
    },
    /// The whole constant factor `(ln(C/beta)/c)^(1/n or 1/(2p))` is replaced by `K`.
    Relative {
        #[serde(rename = "K", default = "unit")]
        k: f64,
    },
}

fn unit() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadiusSpec {
    pub p: f64,
    pub n: u32,
    pub beta: f64,
    #[serde(flatten)]
    pub mode: RadiusMode,
}

/// Which case of the radius formula applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// `p > n/2`
    Upper,
    /// `p = n/2`
    Middle,
    /// `p < n/2`
    Lower,
}

impl RadiusSpec {
    pub fn new(p: f64, n: u32, beta: f64, mode: RadiusMode) -> Result<Self> {
        let spec = Self { p, n, beta, mode };
        spec.validate()?;
        Ok(spec)
    }

    pub fn relative(p: f64, n: u32, beta: f64, k: f64) -> Result<Self> {
        Self::new(p, n, beta, RadiusMode::Relative { k })
    }

    pub fn absolute(p: f64, n: u32, beta: f64, big_c: f64, small_c: f64) -> Result<Self> {
        Self::new(p, n, beta, RadiusMode::Absolute { big_c, small_c })
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p >= 1.0 && self.p.is_finite()) {
            return Err(Error::Domain(format!("Wasserstein exponent p = {} must be >= 1", self.p)));
        }
        if self.n == 0 {
            return Err(Error::Domain("parameter dimension n must be positive".into()));
        }
        if !(self.beta > 0.0 && self.beta < 1.0) {
            return Err(Error::Domain(format!("beta = {} must lie in (0, 1)", self.beta)));
        }
        match self.mode {
            RadiusMode::Absolute { big_c, small_c } => {
                if !(big_c > 0.0 && small_c > 0.0) {
                    return Err(Error::Domain("concentration constants must be positive".into()));
                }
                let l = (big_c / self.beta).ln();
                if !(l > 0.0) {
                    return Err(Error::InvalidConstants(l));
                }
            }
            RadiusMode::Relative { k } => {
                if !(k > 0.0 && k.is_finite()) {
                    return Err(Error::Domain(format!("relative constant K = {k} must be positive")));
                }
            }
        }
        Ok(())
    }

    pub fn branch(&self) -> Branch {
        let half = f64::from(self.n) / 2.0;
        if self.p > half {
            Branch::Upper
        } else if self.p == half {
            Branch::Middle
        } else {
            Branch::Lower
        }
    }

    /// Exponent `e` of the `N^(-e)` decay off the middle branch.
    fn rate(&self) -> Option<f64> {
        match self.branch() {
            Branch::Upper => Some(1.0 / (2.0 * self.p)),
            Branch::Lower => Some(1.0 / f64::from(self.n)),
            Branch::Middle => None,
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Upper => "p>n/2",
            Branch::Middle => "p=n/2",
            Branch::Lower => "p<n/2",
        })
    }
}

/// `h(x) = x^2 / ln(2 + 1/x)^2`.
pub fn h(x: f64) -> f64 {
    let l = (2.0 + 1.0 / x).ln();
    x * x / (l * l)
}

/// Inverse of [`h`] on `x > 0`.
pub fn h_inverse(v: f64) -> Result<f64> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(Error::Domain(format!("h_inverse needs v > 0, got {v}")));
    }
    let (mut lo, mut hi) = (1.0_f64, 1.0_f64);
    while h(hi) < v {
        hi *= 2.0;
    }
    while h(lo) > v {
        lo *= 0.5;
    }
    debug_assert!(h(lo) <= h(hi), "h must be increasing");
    let mut x = 0.5 * (lo + hi);
    for _ in 0..300 {
        x = 0.5 * (lo + hi);
        if hi - lo <= f64::EPSILON * x {
            break;
        }
        if h(x) < v {
            lo = x;
        } else {
            hi = x;
        }
    }
    Ok(x)
}

/// Radius `eps_N(beta, rho)` of the ball that contains the parameter
/// distribution with probability at least `1 - beta`.
pub fn ambiguity_radius(spec: &RadiusSpec, n_samples: usize, rho: f64) -> Result<f64> {
    spec.validate()?;
    if n_samples == 0 {
        return Err(Error::EmptySample);
    }
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::Domain(format!("rho = {rho} must be positive")));
    }
    let n = n_samples as f64;
    let p = spec.p;
    // log-ratio ln(C/beta)/c that both modes reduce to
    let scale = match spec.mode {
        RadiusMode::Absolute { big_c, small_c } => (big_c / spec.beta).ln() / small_c,
        RadiusMode::Relative { k } => match spec.branch() {
            Branch::Upper => k.powf(2.0 * p),
            Branch::Lower => k.powf(f64::from(spec.n)),
            Branch::Middle => k.powf(2.0 * p),
        },
    };
    let eps = match spec.branch() {
        Branch::Middle => h_inverse(scale / n)?.powf(1.0 / p) * rho,
        _ => {
            let e = spec.rate().expect("off-middle branch has a rate");
            scale.powf(e) * rho / n.powf(e)
        }
    };
    Ok(eps)
}

/// `eps_{N1} / eps_{N2}`, free of the concentration constants off the middle branch.
pub fn radius_ratio(spec: &RadiusSpec, n1: usize, n2: usize) -> Result<f64> {
    if n1 == 0 || n2 == 0 {
        return Err(Error::EmptySample);
    }
    let e = spec.rate().ok_or(Error::UnsupportedBranch)?;
    Ok((n2 as f64 / n1 as f64).powf(e))
}

/// Box support of the parameter distribution with its center and half-diameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParameterModel {
    pub bounds: Vec<[f64; 2]>,
    pub a_bar: Vec<f64>,
    pub rho_a: f64,
}

impl ParameterModel {
    /// Box model with `a_bar` at the center and `rho_a = max_i (hi_i - lo_i) / 2`.
    pub fn from_box(bounds: Vec<[f64; 2]>) -> Result<Self> {
        if bounds.is_empty() {
            return Err(Error::Domain("parameter box has no coordinates".into()));
        }
        if bounds.iter().any(|[lo, hi]| !(lo <= hi)) {
            return Err(Error::Domain("parameter box has lo > hi".into()));
        }
        let a_bar = bounds.iter().map(|[lo, hi]| 0.5 * (lo + hi)).collect();
        let rho_a = bounds
            .iter()
            .map(|[lo, hi]| 0.5 * (hi - lo))
            .fold(0.0, f64::max);
        Ok(Self { bounds, a_bar, rho_a })
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    /// Maps a point of the unit cube into the box.
    pub fn scale_unit(&self, u: &[f64]) -> Vec<f64> {
        self.bounds
            .iter()
            .zip(u)
            .map(|([lo, hi], v)| lo + (hi - lo) * v)
            .collect()
    }
}

type InitialMap = Arc<dyn Fn(f64, &[f64]) -> f64 + Send + Sync>;
type BoundaryMap = Arc<dyn Fn(f64, f64, &[f64]) -> f64 + Send + Sync>;

/// Parameter-to-input maps and their Lipschitz constants.
#[derive(Clone)]
pub struct InputParameterization {
    pub u0: InitialMap,
    pub ub: BoundaryMap,
    pub l0: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    pub lb: Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>,
}

impl fmt::Debug for InputParameterization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("InputParameterization { .. }")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InputLocation {
    Initial { x: f64 },
    Boundary { x: f64, t: f64 },
}

impl InputParameterization {
    pub fn value(&self, at: InputLocation, a: &[f64]) -> f64 {
        match at {
            InputLocation::Initial { x } => (self.u0)(x, a),
            InputLocation::Boundary { x, t } => (self.ub)(x, t, a),
        }
    }

    pub fn lipschitz(&self, at: InputLocation) -> f64 {
        match at {
            InputLocation::Initial { x } => (self.l0)(x),
            InputLocation::Boundary { x, t } => (self.lb)(x, t),
        }
    }
}

/// `[u(a_bar) - sqrt(n) L rho_a, u(a_bar) + sqrt(n) L rho_a]`.
pub fn input_support(
    par: &InputParameterization,
    pm: &ParameterModel,
    at: InputLocation,
) -> SupportInterval {
    let center = par.value(at, &pm.a_bar);
    let half = (pm.dim() as f64).sqrt() * par.lipschitz(at) * pm.rho_a;
    SupportInterval::new(center - half, center + half).expect("finite input support")
}

/// Empirical center with a W1 radius on a known support.
#[derive(Debug, Clone, PartialEq)]
pub struct AmbiguityBall {
    pub center: SteppedCdf,
    pub radius: f64,
    pub support: SupportInterval,
}

/// Ball of radius `L * eps` around the empirical CDF of `samples`.
pub fn build_input_ball(
    samples: &[f64],
    support: SupportInterval,
    lipschitz: f64,
    eps: f64,
) -> Result<AmbiguityBall> {
    if !(eps >= 0.0 && lipschitz >= 0.0) {
        return Err(Error::Domain(format!(
            "radius factors must be non-negative (L = {lipschitz}, eps = {eps})"
        )));
    }
    let center = SteppedCdf::from_samples(samples, support)?;
    Ok(AmbiguityBall {
        center,
        radius: lipschitz * eps,
        support,
    })
}
