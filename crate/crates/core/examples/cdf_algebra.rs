//! Exact CDF operations: inverses, reflection, pushforward and W1.

use ambiflow::cdf::reflect;
use ambiflow::{w1_distance, AnyCdf, Cdf, SteppedCdf, SupportInterval};

fn main() -> ambiflow::Result<()> {
    let s = SupportInterval::new(0.0, 4.0)?;
    let f = SteppedCdf::from_samples(&[0.5, 1.0, 1.0, 3.0], s)?;
    let g = SteppedCdf::from_samples(&[1.5, 2.0, 2.5, 3.5], s)?;

    println!("F(1.0) = {}, F(1.0-) = {}", f.eval(1.0), f.eval_left(1.0));
    for y in [0.25, 0.5, 0.75] {
        println!(
            "y = {y}: generalized inverse {}, left inverse {}",
            f.generalized_inverse(y)?,
            f.left_inverse(y)?
        );
    }

    println!("W1(F, G) = {}", w1_distance(&f, &g));
    let (fr, gr) = (f.reflect(s), g.reflect(s));
    println!("W1 after reflection = {}", w1_distance(&fr, &gr));
    let (fp, gp) = (f.push_affine(0.5, 1.0), g.push_affine(0.5, 1.0));
    println!("W1 after u -> u/2 + 1 = {}", w1_distance(&fp, &gp));

    // piecewise view and a JSON round trip
    let p = reflect(&AnyCdf::from(f.clone()), s)?;
    let json = AnyCdf::from(p.clone()).to_json();
    println!("reflected F as JSON: {json}");
    assert_eq!(AnyCdf::from_json(&json)?, AnyCdf::from(p));
    Ok(())
}
