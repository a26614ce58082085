//! Band propagation under a nonlinear flux, where only the band path applies.

use std::sync::Arc;

use ambiflow::envelope::AmbiguityBand;
use ambiflow::numeric::linspace;
use ambiflow::propagation::{
    band_discrepancy, propagate_ball, propagate_band, BallMap, BandMap, PhysicsModel, SpaceTimeGrid, TraceOptions,
};
use ambiflow::{Error, PiecewiseCdf, Segment, SegmentKind, SupportInterval};

fn uniform(lo: f64, hi: f64) -> PiecewiseCdf {
    let s = SupportInterval::new(lo, hi).unwrap();
    PiecewiseCdf::new(s, vec![Segment::new(lo, hi, SegmentKind::Linear { y_start: 0.0, y_end: 1.0 })]).unwrap()
}

fn main() -> ambiflow::Result<()> {
    // convex flux q = u / 2 + u^2 / 2 with linear decay
    let model = PhysicsModel::nonlinear(Arc::new(|u| 0.5 + u), Arc::new(|u| -0.3 * u), Arc::new(|_| -0.3));
    let band = AmbiguityBand {
        lower: uniform(1.0, 2.0),
        upper: uniform(0.8, 1.6),
        rho: 0.2,
        support: SupportInterval::new(0.8, 2.0)?,
        uninformative: false,
    };
    let map: BandMap = Arc::new(move |_| band.clone());
    let g = SpaceTimeGrid::new(linspace(0.0, 2.0, 5), linspace(0.0, 2.0, 5), linspace(0.0, 2.5, 26))?;
    let opts = TraceOptions::default();
    let field = propagate_band(&model, &map, &map, &g, &opts)?;
    let w = band_discrepancy(&field, 0.0, 2.5)?;
    print!("{}", w.to_csv("w_env"));

    let ball_map: BallMap = Arc::new(|_| unreachable!());
    match propagate_ball(&model, &ball_map, &ball_map, &g, &opts) {
        Err(Error::LinearityRequired) => println!("ball propagation refused: linearity required"),
        other => println!("unexpected: {:?}", other.map(|_| ())),
    }
    Ok(())
}
