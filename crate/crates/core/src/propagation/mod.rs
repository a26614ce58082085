//! Characteristic solvers for the CDF transport equation and the W1
//! discrepancy equation on the half line `x >= 0` with inflow at `x = 0`.

mod field;
mod model;
mod solve;
mod trace;

pub use field::{slice_distance, CdfField, CdfMap, CdfSlice, NodeField, ScalarField, SpaceTimeGrid, StateField, TracedSlice};
pub use model::{PhysicsModel, ScalarFn};
pub use solve::{
    band_discrepancy, propagate_ball, propagate_band, propagate_pointwise_bound, solve_cdf_pde, solve_w1_pde, BallMap,
    BandMap, PropagatedBall, PropagatedBand,
};
pub use trace::{trace_characteristic, trace_numerical, trace_with, CornerPrecedence, Foot, Origin, TraceOptions};
