//! Sample-based input bands pushed through the linear example and compared
//! with the true CDF at a few nodes.

use std::sync::Arc;

use ambiflow::ambiguity::{ambiguity_radius, RadiusSpec};
use ambiflow::envelope::sandwiched;
use ambiflow::propagation::{band_discrepancy, propagate_band, solve_cdf_pde, SpaceTimeGrid, TraceOptions};
use ambiflow::scenario::{draw_parameters, example_model, seeded_rng, true_input_maps, ScenarioInputs, Seeding};

fn main() -> ambiflow::Result<()> {
    let ex = example_model(-1.0);
    let n = 100;
    let spec = RadiusSpec::relative(1.0, 3, 0.05, 1.0)?;
    let eps = ambiguity_radius(&spec, n, ex.pm.rho_a)?;
    let inputs = Arc::new(ScenarioInputs::new(draw_parameters(&mut seeded_rng(11, 0), n), eps, Seeding::Max)?);
    let (band0, bandb) = inputs.band_maps();

    let g = SpaceTimeGrid::new(vec![0.5, 1.5], vec![0.25, 1.0, 1.75], vec![0.0, 1.0, 2.0])?;
    let opts = TraceOptions::default();
    let bands = propagate_band(&ex.model, &band0, &bandb, &g, &opts)?;
    let w_env = band_discrepancy(&bands, 0.0, 0.0)?;
    let (f0, fb) = true_input_maps();
    let truth = solve_cdf_pde(&ex.model, &f0, &fb, &g, &opts)?;

    for (it, ix) in g.nodes() {
        let b = bands.get(it, ix);
        let (lo, hi) = (b.lower.as_exact().unwrap(), b.upper.as_exact().unwrap());
        let f = truth.slice(it, ix).as_exact().unwrap();
        println!(
            "x = {} t = {}: w_env = {:.5}, truth inside = {}",
            g.xs[ix],
            g.ts[it],
            w_env.get(it, ix),
            sandwiched(lo, f, hi)
        );
    }
    Ok(())
}
