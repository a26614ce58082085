//! Radius field of the advection-depletion example, solved along characteristics.

use ambiflow::numeric::linspace;
use ambiflow::propagation::{solve_w1_pde, SpaceTimeGrid, TraceOptions};
use ambiflow::scenario::{example_model, l0, lb};

fn main() -> ambiflow::Result<()> {
    let ex = example_model(-1.0);
    let eps = 0.1;
    let rho0 = l0() * eps;
    let g = SpaceTimeGrid::new(linspace(0.0, 2.0, 5), linspace(0.0, 2.0, 5), vec![0.0])?;
    let w = solve_w1_pde(&ex.model, &|_| rho0, &|t| lb(t) * eps, &g, &TraceOptions::default())?;

    println!("rho_0 = {rho0:.6}");
    for (x, t, v) in w.iter() {
        let closed = if t < x { rho0 * (-t).exp() } else { lb(t - x) * eps * (-x).exp() };
        println!("x = {x:.1} t = {t:.1}  w = {v:.6}  closed form {closed:.6}");
    }
    print!("{}", w.to_csv("w"));
    Ok(())
}
