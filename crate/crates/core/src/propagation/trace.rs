use serde::{Deserialize, Serialize};

use super::model::PhysicsModel;
use crate::error::{Error, Result};

/// Where a characteristic through `(x, U, t)` starts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Origin {
    Initial { x0: f64, u0: f64 },
    Boundary { tb: f64, ub: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Foot {
    pub origin: Origin,
    /// Time spent on the characteristic between the foot and the query point.
    pub transit_time: f64,
}

impl Foot {
    /// State value at the foot.
    pub fn state(&self) -> f64 {
        match self.origin {
            Origin::Initial { u0, .. } => u0,
            Origin::Boundary { ub, .. } => ub,
        }
    }

    pub fn is_initial(&self) -> bool {
        matches!(self.origin, Origin::Initial { .. })
    }
}

/// Which input wins on the characteristic leaving the corner `x = 0, t = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CornerPrecedence {
    #[default]
    Boundary,
    Initial,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceOptions {
    /// Mixed absolute/relative local error bound per integration step.
    pub tol: f64,
    /// Accuracy of the boundary-hitting time.
    pub event_tol: f64,
    pub max_steps: usize,
    pub corner: CornerPrecedence,
}

impl Default for TraceOptions {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            event_tol: 1e-12,
            max_steps: 200_000,
            corner: CornerPrecedence::Boundary,
        }
    }
}

/// Follows the characteristic through `(x, U, t)` back to the initial line or the inflow boundary.
pub fn trace_characteristic(model: &PhysicsModel, x: f64, u: f64, t: f64) -> Result<Foot> {
    trace_with(model, x, u, t, &TraceOptions::default())
}

pub fn trace_with(model: &PhysicsModel, x: f64, u: f64, t: f64, opts: &TraceOptions) -> Result<Foot> {
    check_query(x, t)?;
    match model.theta_r() {
        Some(theta) => Ok(linear_foot(theta, x, u, t, opts.corner)),
        None => trace_numerical(model, x, u, t, opts),
    }
}

fn check_query(x: f64, t: f64) -> Result<()> {
    if !(x >= 0.0 && t >= 0.0 && x.is_finite() && t.is_finite()) {
        return Err(Error::Domain(format!("query point (x = {x}, t = {t}) must have x, t >= 0")));
    }
    Ok(())
}

/// Unit speed, `U(s) = U e^{theta (s - t)}`.
pub(crate) fn linear_foot(theta: f64, x: f64, u: f64, t: f64, corner: CornerPrecedence) -> Foot {
    if t == 0.0 {
        return Foot {
            origin: Origin::Initial { x0: x, u0: u },
            transit_time: 0.0,
        };
    }
    if x > t || (x == t && corner == CornerPrecedence::Initial) {
        Foot {
            origin: Origin::Initial {
                x0: x - t,
                u0: u * (-theta * t).exp(),
            },
            transit_time: t,
        }
    } else {
        Foot {
            origin: Origin::Boundary {
                tb: t - x,
                ub: u * (-theta * x).exp(),
            },
            transit_time: x,
        }
    }
}

// Dormand-Prince 5(4) tableau (autonomous system, so the nodes are not needed)
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

struct Backward<'a> {
    model: &'a PhysicsModel,
}

impl Backward<'_> {
    /// Right-hand side in reversed time `sigma = t - s`.
    fn rhs(&self, y: [f64; 2]) -> Result<[f64; 2]> {
        let q = (self.model.qdot)(y[1]);
        if !(q > 0.0) {
            return Err(Error::NotUpstream { state: y[1], qdot: q });
        }
        Ok([-q, -(self.model.r)(y[1])])
    }

    /// One step of size `h`: fifth-order result and error estimate.
    fn step(&self, y: [f64; 2], h: f64) -> Result<([f64; 2], [f64; 2])> {
        let mut k = [[0.0; 2]; 7];
        for s in 0..7 {
            let mut ys = y;
            for (j, kj) in k.iter().enumerate().take(s) {
                ys[0] += h * A[s][j] * kj[0];
                ys[1] += h * A[s][j] * kj[1];
            }
            k[s] = self.rhs(ys)?;
        }
        let mut out = y;
        let mut err = [0.0; 2];
        for s in 0..7 {
            for d in 0..2 {
                out[d] += h * B5[s] * k[s][d];
                err[d] += h * (B5[s] - B4[s]) * k[s][d];
            }
        }
        Ok((out, err))
    }
}

/// Adaptive Dormand-Prince integration of the characteristic, used for
/// nonlinear models (and to cross-check the linear closed form).
pub fn trace_numerical(model: &PhysicsModel, x: f64, u: f64, t: f64, opts: &TraceOptions) -> Result<Foot> {
    check_query(x, t)?;
    if t == 0.0 {
        return Ok(Foot {
            origin: Origin::Initial { x0: x, u0: u },
            transit_time: 0.0,
        });
    }
    let sys = Backward { model };
    sys.rhs([x, u])?;
    if x == 0.0 {
        return Ok(Foot {
            origin: Origin::Boundary { tb: t, ub: u },
            transit_time: 0.0,
        });
    }

    let corner = |sigma: f64, ub: f64| match opts.corner {
        CornerPrecedence::Boundary => Foot {
            origin: Origin::Boundary { tb: (t - sigma).max(0.0), ub },
            transit_time: sigma.min(t),
        },
        CornerPrecedence::Initial => Foot {
            origin: Origin::Initial { x0: 0.0, u0: ub },
            transit_time: t,
        },
    };

    let mut sigma = 0.0;
    let mut y = [x, u];
    let mut h = (0.05 * t).min(0.1).max(1e-6 * t);
    for _ in 0..opts.max_steps {
        let last = sigma + h >= t;
        if last {
            h = t - sigma;
        }
        let (yn, err) = sys.step(y, h)?;
        let scale = |d: usize| opts.tol * (1.0 + y[d].abs().max(yn[d].abs()));
        let en = (err[0].abs() / scale(0)).max(err[1].abs() / scale(1));
        if !en.is_finite() {
            return Err(Error::Trace(format!("non-finite state at sigma = {sigma}")));
        }
        if en > 1.0 {
            h *= (0.9 * en.powf(-0.2)).max(0.2);
            if h < 1e-15 * t.max(1.0) {
                return Err(Error::Trace(format!("step size underflow at sigma = {sigma}")));
            }
            continue;
        }
        if yn[0] < 0.0 {
            let (hs, ys) = locate_boundary(&sys, y, h, opts.event_tol)?;
            let s_hit = sigma + hs;
            if t - s_hit <= opts.event_tol {
                return Ok(corner(s_hit, ys[1]));
            }
            return Ok(Foot {
                origin: Origin::Boundary { tb: t - s_hit, ub: ys[1] },
                transit_time: s_hit,
            });
        }
        sigma += h;
        y = yn;
        if last {
            if y[0] <= opts.event_tol {
                return Ok(corner(t, y[1]));
            }
            return Ok(Foot {
                origin: Origin::Initial { x0: y[0], u0: y[1] },
                transit_time: t,
            });
        }
        h *= (0.9 * en.max(1e-10).powf(-0.2)).min(5.0);
    }
    Err(Error::Trace(format!("no foot within {} steps", opts.max_steps)))
}

/// Step length `h* in (0, h]` at which the step from `y` lands on `x = 0`.
fn locate_boundary(sys: &Backward<'_>, y: [f64; 2], h: f64, tol: f64) -> Result<(f64, [f64; 2])> {
    let (mut lo, mut hi) = (0.0, h);
    let mut hit = sys.step(y, h)?.0;
    for _ in 0..200 {
        let m = 0.5 * (lo + hi);
        if m <= lo || m >= hi {
            break;
        }
        let (ym, _) = sys.step(y, m)?;
        hit = ym;
        if ym[0].abs() <= tol {
            return Ok((m, [0.0, ym[1]]));
        }
        if ym[0] > 0.0 {
            lo = m;
        } else {
            hi = m;
        }
    }
    Ok((0.5 * (lo + hi), [0.0, hit[1]]))
}
