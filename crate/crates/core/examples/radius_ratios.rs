//! Finite-sample ambiguity radii and their constant-free ratios.

use ambiflow::ambiguity::{ambiguity_radius, radius_ratio, RadiusSpec};

fn main() -> ambiflow::Result<()> {
    let rho_a = 0.5;
    for (p, n) in [(1.0, 3), (2.0, 1), (1.0, 2)] {
        let spec = RadiusSpec::relative(p, n, 0.05, 1.0)?;
        println!("p = {p}, n = {n} ({} branch)", spec.branch());
        for big_n in [25, 100, 400, 1600] {
            let eps = ambiguity_radius(&spec, big_n, rho_a)?;
            match radius_ratio(&spec, 25, big_n) {
                Ok(r) => println!("  N = {big_n:5}  eps = {eps:.6}  eps_25/eps_N = {r:.6}"),
                Err(_) => println!("  N = {big_n:5}  eps = {eps:.6}  (ratio depends on constants)"),
            }
        }
    }

    let abs = RadiusSpec::absolute(1.0, 3, 0.05, 2.0, 1.0)?;
    println!("absolute mode, N = 100: eps = {:.6}", ambiguity_radius(&abs, 100, rho_a)?);
    Ok(())
}
