//! Monte Carlo solutions of the example against the characteristic CDF solution.

use ambiflow::propagation::{solve_cdf_pde, SpaceTimeGrid, TraceOptions};
use ambiflow::scenario::{example_model, monte_carlo_cdf, true_input_maps};
use ambiflow::w1_distance;

fn main() -> ambiflow::Result<()> {
    let (xs, ts) = (vec![0.25, 1.0, 1.75], vec![0.5, 1.0, 1.9]);
    let g = SpaceTimeGrid::new(xs.clone(), ts.clone(), vec![0.0])?;
    let (f0, fb) = true_input_maps();
    let field = solve_cdf_pde(&example_model(-1.0).model, &f0, &fb, &g, &TraceOptions::default())?;
    for m in [1_000, 10_000, 100_000] {
        let mut worst: f64 = 0.0;
        for (it, ix) in g.nodes() {
            let mc = monte_carlo_cdf(m, xs[ix], ts[it], -1.0, 42)?;
            worst = worst.max(w1_distance(&mc, field.slice(it, ix).as_exact().unwrap()));
        }
        println!("M = {m:6}: max W1 over 9 nodes = {worst:.2e}");
    }
    Ok(())
}
