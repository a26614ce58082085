//! Input ambiguity ball from a handful of samples and the band it induces.

use ambiflow::ambiguity::{build_input_ball, ambiguity_radius, RadiusSpec};
use ambiflow::envelope::{band_contains, band_from_ball};
use ambiflow::scenario::{draw_parameters, initial_support, l0, seeded_rng, true_input_cdf_u0, u0};
use ambiflow::{w1_distance, Cdf};

fn main() -> ambiflow::Result<()> {
    let n = 40;
    let params = draw_parameters(&mut seeded_rng(7, 0), n);
    let samples: Vec<f64> = params.iter().map(|a| u0(a)).collect();

    let spec = RadiusSpec::relative(1.0, 3, 0.05, 1.0)?;
    let eps = ambiguity_radius(&spec, n, 0.5)?;
    let ball = build_input_ball(&samples, initial_support(), l0(), eps)?;
    let band = band_from_ball(&ball);

    let truth = true_input_cdf_u0();
    println!("eps_N = {eps:.5}, rho_0 = {:.5}", ball.radius);
    println!("W1(center, truth) = {:.5}", w1_distance(&ball.center, &truth));
    println!("truth inside band: {}", band_contains(&band, &truth));
    println!("{:>6} {:>8} {:>8} {:>8} {:>8}", "u", "lower", "center", "truth", "upper");
    for k in 0..=10 {
        let u = 0.2 * k as f64;
        println!(
            "{u:6.2} {:8.4} {:8.4} {:8.4} {:8.4}",
            band.lower.eval(u),
            ball.center.eval(u),
            truth.eval(u),
            band.upper.eval(u)
        );
    }
    Ok(())
}
