//! Repeated sample draws: is the propagated truth inside the propagated sets?

use ambiflow::ambiguity::RadiusSpec;
use ambiflow::numeric::linspace;
use ambiflow::scenario::{validate_containment, ExampleConfig, Seeding};

fn main() -> ambiflow::Result<()> {
    let axis = linspace(0.0, 2.0, 11);
    for seeding in [Seeding::Exact, Seeding::Nominal, Seeding::Zero] {
        let cfg = ExampleConfig {
            theta_r: -1.0,
            n_samples: 100,
            radius: RadiusSpec::relative(1.0, 3, 0.05, 1.0)?,
            seed: 2024,
            seeding,
        };
        let rep = validate_containment(&cfg, 10, &axis, &axis)?;
        println!(
            "{seeding:?}: containment {:.4} (ball {:.4}, band {:.4}), {} violations, {} in the mechanism, inputs contained in {}/{} trials",
            rep.containment_fraction,
            rep.ball_containment_fraction,
            rep.band_containment_fraction,
            rep.violation_count,
            rep.mechanism_violations,
            rep.input_containment_trials,
            rep.trials
        );
    }
    Ok(())
}
