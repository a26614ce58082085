use std::sync::Arc;

use rayon::prelude::*;

use super::field::{slice_distance, CdfField, CdfMap, CdfSlice, NodeField, ScalarField, SpaceTimeGrid, StateField, TracedSlice};
use super::model::PhysicsModel;
use super::trace::{linear_foot, trace_with, Origin, TraceOptions};
use crate::ambiguity::AmbiguityBall;
use crate::cdf::{PiecewiseCdf, SteppedCdf};
use crate::envelope::AmbiguityBand;
use crate::error::{Error, Result};

/// Foot location and growth factor `e^{theta tau}` of the unit-speed characteristic through `(x, t)`.
fn linear_node(theta: f64, x: f64, t: f64, opts: &TraceOptions) -> (Origin, f64) {
    let foot = linear_foot(theta, x, 1.0, t, opts.corner);
    (foot.origin, (theta * foot.transit_time).exp())
}

fn node_list(grid: &SpaceTimeGrid) -> Vec<(f64, f64)> {
    grid.nodes().map(|(it, ix)| (grid.xs[ix], grid.ts[it])).collect()
}

fn exact_slice(theta: f64, x: f64, t: f64, f0: &CdfMap, fb: &CdfMap, opts: &TraceOptions) -> PiecewiseCdf {
    let (origin, scale) = linear_node(theta, x, t, opts);
    let input = match origin {
        Origin::Initial { x0, .. } => f0(x0),
        Origin::Boundary { tb, .. } => fb(tb),
    };
    if scale == 1.0 {
        input
    } else {
        input.push_affine(scale, 0.0)
    }
}

/// Solves the CDF transport equation by carrying input CDF values along characteristics.
///
/// Linear models give exact pushforward slices; otherwise every state is
/// traced numerically.
pub fn solve_cdf_pde(
    model: &PhysicsModel,
    f0: &CdfMap,
    fb: &CdfMap,
    grid: &SpaceTimeGrid,
    opts: &TraceOptions,
) -> Result<CdfField> {
    grid.validate()?;
    let per_node: Vec<(CdfSlice, Vec<f64>)> = node_list(grid)
        .into_par_iter()
        .map(|(x, t)| -> Result<(CdfSlice, Vec<f64>)> {
            let slice = match model.theta_r() {
                Some(theta) => CdfSlice::Exact(exact_slice(theta, x, t, f0, fb, opts)),
                None => CdfSlice::Traced(TracedSlice {
                    model: model.clone(),
                    x,
                    t,
                    initial: f0.clone(),
                    boundary: fb.clone(),
                    opts: *opts,
                }),
            };
            let values = grid
                .us
                .iter()
                .map(|&u| slice.eval(u))
                .collect::<Result<Vec<f64>>>()?;
            Ok((slice, values))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut slices = Vec::with_capacity(per_node.len());
    let mut values = Vec::with_capacity(per_node.len() * grid.us.len());
    for (s, v) in per_node {
        slices.push(s);
        values.extend(v);
    }
    Ok(CdfField {
        grid: grid.clone(),
        slices: NodeField {
            xs: grid.xs.clone(),
            ts: grid.ts.clone(),
            nodes: slices,
        },
        values,
    })
}

/// Solves the W1 discrepancy equation `dw/dt = rdot w` along unit-speed characteristics.
pub fn solve_w1_pde(
    model: &PhysicsModel,
    w0: &(dyn Fn(f64) -> f64 + Sync),
    wb: &(dyn Fn(f64) -> f64 + Sync),
    grid: &SpaceTimeGrid,
    opts: &TraceOptions,
) -> Result<ScalarField> {
    let theta = model.theta_r().ok_or(Error::LinearityRequired)?;
    grid.validate()?;
    let nodes = node_list(grid)
        .into_par_iter()
        .map(|(x, t)| {
            let (origin, scale) = linear_node(theta, x, t, opts);
            let w = match origin {
                Origin::Initial { x0, .. } => w0(x0),
                Origin::Boundary { tb, .. } => wb(tb),
            };
            if !(w >= 0.0) {
                return Err(Error::Domain(format!("input discrepancy {w} must be non-negative")));
            }
            Ok(w * scale)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(NodeField {
        xs: grid.xs.clone(),
        ts: grid.ts.clone(),
        nodes,
    })
}

/// Transports a pointwise bound `e(U)` on CDF differences unchanged along characteristics.
pub fn propagate_pointwise_bound(
    model: &PhysicsModel,
    e0: &(dyn Fn(f64, f64) -> f64 + Sync),
    eb: &(dyn Fn(f64, f64) -> f64 + Sync),
    grid: &SpaceTimeGrid,
    opts: &TraceOptions,
) -> Result<StateField> {
    grid.validate()?;
    let per_node = node_list(grid)
        .into_par_iter()
        .map(|(x, t)| {
            grid.us
                .iter()
                .map(|&u| {
                    let foot = trace_with(model, x, u, t, opts)?;
                    let v = match foot.origin {
                        Origin::Initial { x0, u0 } => e0(u0, x0),
                        Origin::Boundary { tb, ub } => eb(ub, tb),
                    };
                    if !(v >= 0.0) {
                        return Err(Error::Domain(format!("bound {v} must be non-negative")));
                    }
                    Ok(v)
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(StateField {
        grid: grid.clone(),
        values: per_node.into_iter().flatten().collect(),
    })
}

/// Band at one space-time node.
#[derive(Debug, Clone)]
pub struct PropagatedBand {
    pub lower: CdfSlice,
    pub upper: CdfSlice,
    /// Radius of the input band feeding this node (exact for linear models).
    pub input_rho: f64,
    pub uninformative: bool,
}

pub type BandMap = Arc<dyn Fn(f64) -> AmbiguityBand + Send + Sync>;
pub type BallMap = Arc<dyn Fn(f64) -> AmbiguityBall + Send + Sync>;

/// Propagates both envelopes of the input bands as CDF solutions.
pub fn propagate_band(
    model: &PhysicsModel,
    band0: &BandMap,
    bandb: &BandMap,
    grid: &SpaceTimeGrid,
    opts: &TraceOptions,
) -> Result<NodeField<PropagatedBand>> {
    grid.validate()?;
    let nodes = match model.theta_r() {
        Some(theta) => node_list(grid)
            .into_par_iter()
            .map(|(x, t)| {
                let (origin, scale) = linear_node(theta, x, t, opts);
                let band = match origin {
                    Origin::Initial { x0, .. } => band0(x0),
                    Origin::Boundary { tb, .. } => bandb(tb),
                };
                let push = |c: PiecewiseCdf| if scale == 1.0 { c } else { c.push_affine(scale, 0.0) };
                PropagatedBand {
                    input_rho: band.rho,
                    uninformative: band.uninformative,
                    lower: CdfSlice::Exact(push(band.lower)),
                    upper: CdfSlice::Exact(push(band.upper)),
                }
            })
            .collect(),
        None => {
            let (b0, bb) = (band0.clone(), bandb.clone());
            let lower0: CdfMap = Arc::new(move |x| b0(x).lower);
            let lowerb: CdfMap = Arc::new(move |t| bb(t).lower);
            let (b0, bb) = (band0.clone(), bandb.clone());
            let upper0: CdfMap = Arc::new(move |x| b0(x).upper);
            let upperb: CdfMap = Arc::new(move |t| bb(t).upper);
            let traced = |x: f64, t: f64, initial: &CdfMap, boundary: &CdfMap| {
                CdfSlice::Traced(TracedSlice {
                    model: model.clone(),
                    x,
                    t,
                    initial: initial.clone(),
                    boundary: boundary.clone(),
                    opts: *opts,
                })
            };
            node_list(grid)
                .into_iter()
                .map(|(x, t)| {
                    let (input_rho, uninformative) = if t == 0.0 {
                        let b = band0(x);
                        (b.rho, b.uninformative)
                    } else {
                        (f64::NAN, false)
                    };
                    PropagatedBand {
                        lower: traced(x, t, &lower0, &lowerb),
                        upper: traced(x, t, &upper0, &upperb),
                        input_rho,
                        uninformative,
                    }
                })
                .collect()
        }
    };
    Ok(NodeField {
        xs: grid.xs.clone(),
        ts: grid.ts.clone(),
        nodes,
    })
}

/// `W1(lower, upper)` of a propagated band at every node.
///
/// Traced slices are integrated numerically over `[u_lo, u_hi]`.
pub fn band_discrepancy(field: &NodeField<PropagatedBand>, u_lo: f64, u_hi: f64) -> Result<ScalarField> {
    let nodes = field
        .nodes
        .par_iter()
        .map(|b| slice_distance(&b.lower, &b.upper, u_lo, u_hi))
        .collect::<Result<Vec<f64>>>()?;
    Ok(NodeField {
        xs: field.xs.clone(),
        ts: field.ts.clone(),
        nodes,
    })
}

/// Ball at one space-time node.
#[derive(Debug, Clone, PartialEq)]
pub struct PropagatedBall {
    pub center: SteppedCdf,
    pub radius: f64,
}

/// Pushes the empirical centers forward and transports the radii (linear models only).
pub fn propagate_ball(
    model: &PhysicsModel,
    ball0: &BallMap,
    ballb: &BallMap,
    grid: &SpaceTimeGrid,
    opts: &TraceOptions,
) -> Result<NodeField<PropagatedBall>> {
    let theta = model.theta_r().ok_or(Error::LinearityRequired)?;
    grid.validate()?;
    let nodes = node_list(grid)
        .into_par_iter()
        .map(|(x, t)| {
            let (origin, scale) = linear_node(theta, x, t, opts);
            let ball = match origin {
                Origin::Initial { x0, .. } => ball0(x0),
                Origin::Boundary { tb, .. } => ballb(tb),
            };
            PropagatedBall {
                center: if scale == 1.0 {
                    ball.center
                } else {
                    ball.center.push_affine(scale, 0.0)
                },
                radius: ball.radius * scale,
            }
        })
        .collect();
    Ok(NodeField {
        xs: grid.xs.clone(),
        ts: grid.ts.clone(),
        nodes,
    })
}
