//! One PASS/FAIL line per acceptance criterion, with pinned tolerances and runtimes.
//! Run with `cargo test --test acceptance -- --nocapture` to see the table.

mod common;

use std::sync::Arc;
use std::time::Instant;

use ambiflow::ambiguity::{ambiguity_radius, radius_ratio, AmbiguityBall, RadiusSpec};
use ambiflow::cdf::reflect;
use ambiflow::envelope::{band_contains, band_from_ball, lower_envelope_discrete, upper_envelope_discrete};
use ambiflow::numeric::linspace;
use ambiflow::propagation::*;
use ambiflow::scenario::*;
use ambiflow::{w1_distance, AnyCdf, Cdf, PiecewiseCdf, SteppedCdf, SupportInterval};
use common::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

/// Running tally of propagated slices checked for CDF validity.
#[derive(Default)]
struct Validity {
    checked: usize,
    invalid: usize,
}

impl Validity {
    fn check(&mut self, field: &CdfField, us: &[f64]) {
        for (_, _, slice) in field.slices.iter() {
            self.checked += 1;
            if !slice_is_valid(slice, us, 1e-12) {
                self.invalid += 1;
            }
        }
    }
}

fn admissible(f: &SteppedCdf, r: &mut ChaCha8Rng) -> Option<f64> {
    let cap = f.upper_area().min(f.lower_area());
    (cap > 0.0).then(|| cap * r.gen_range(0.01..0.99))
}

fn criterion_1() -> Outcome {
    let mut r = rng(1001);
    let mut worst: f64 = 0.0;
    let mut cdfs = 0;
    while cdfs < 50 {
        let s = random_support(&mut r);
        let f = random_stepped(&mut r, s, 20);
        if admissible(&f, &mut r).is_none() {
            continue;
        }
        cdfs += 1;
        for _ in 0..5 {
            let rho = admissible(&f, &mut r).unwrap();
            let up = upper_envelope_discrete(&f, rho).unwrap();
            let low = lower_envelope_discrete(&f, rho).unwrap();
            for t in linspace(s.lo() - 0.1, s.hi() - 1e-9, 1000) {
                worst = worst.max((up.eval(t) - upper_by_bisection(&f, rho, t)).abs());
                worst = worst.max((low.eval(t) - lower_by_bisection(&f, rho, t)).abs());
            }
        }
    }
    Outcome {
        pass: worst <= 1e-8,
        detail: format!("50 CDFs x 5 radii x 1000 points, max gap {worst:.2e} <= 1e-8"),
    }
}

fn criterion_2() -> Outcome {
    let s = SupportInterval::new(0.0, 4.0).unwrap();
    let t1 = 2.5;
    let f = SteppedCdf::dirac(t1, s).unwrap();
    let mut worst: f64 = 0.0;
    for rho in [0.05, 0.3, 0.7, 1.2, 1.45] {
        let up = upper_envelope_discrete(&f, rho).unwrap();
        let low = lower_envelope_discrete(&f, rho).unwrap();
        for t in linspace(-0.5, 3.999, 2000) {
            let want_up = if t < 0.0 { 0.0 } else if t < t1 { (rho / (t1 - t)).min(1.0) } else { 1.0 };
            let want_low = if t <= t1 { 0.0 } else { 1.0 - (rho / (t - t1)).min(1.0) };
            worst = worst.max((up.eval(t) - want_up).abs()).max((low.eval(t) - want_low).abs());
        }
    }
    Outcome {
        pass: worst <= 1e-12,
        detail: format!("Dirac at 2.5 on [0, 4], 5 radii, max gap {worst:.2e} <= 1e-12"),
    }
}

fn criterion_3() -> Outcome {
    let mut r = rng(1003);
    let (mut checked, mut inside) = (0, 0);
    for _ in 0..10 {
        let s = random_support(&mut r);
        let f = random_empirical(&mut r, s, 15);
        let rho = f.upper_area().min(f.lower_area()) * r.gen_range(0.05..0.9);
        let band = band_from_ball(&AmbiguityBall {
            center: f.clone(),
            radius: rho,
            support: s,
        });
        for _ in 0..100 {
            let g = nearby(&f, rho, &mut r);
            assert!(w1_distance(&f, &g) <= rho * (1.0 + 1e-12));
            checked += 1;
            inside += usize::from(band_contains(&band, &g));
        }
    }
    Outcome {
        pass: inside == checked,
        detail: format!("{inside}/{checked} CDFs of the ball inside the band"),
    }
}

fn criterion_4() -> Outcome {
    let ex = example_model(-1.0);
    let eps = 0.1;
    let rho0 = l0() * eps;
    let g = SpaceTimeGrid::new(linspace(0.0, 2.0, 50), linspace(0.0, 2.0, 50), vec![0.0]).unwrap();
    let started = Instant::now();
    let w = solve_w1_pde(&ex.model, &|_| rho0, &|t| lb(t) * eps, &g, &TraceOptions::default()).unwrap();
    let secs = started.elapsed().as_secs_f64();
    let worst = w
        .iter()
        .map(|(x, t, v)| {
            let want = if t < x { rho0 * (-t).exp() } else { lb(t - x) * eps * (-x).exp() };
            (v - want).abs()
        })
        .fold(0.0, f64::max);
    Outcome {
        pass: worst <= 1e-10 && secs <= 1.0,
        detail: format!("50x50 grid, max gap {worst:.2e} <= 1e-10, solve {secs:.3} s <= 1 s"),
    }
}

fn const_map(f: PiecewiseCdf) -> CdfMap {
    Arc::new(move |_| f.clone())
}

fn moving_map(f: PiecewiseCdf) -> CdfMap {
    Arc::new(move |t: f64| f.push_affine(1.0 + 0.5 * (3.0 * t).sin().powi(2), 0.2 * t))
}

fn unit_grid(n: usize, us: Vec<f64>) -> SpaceTimeGrid {
    SpaceTimeGrid::new(linspace(0.0, 2.0, n), linspace(0.0, 2.0, n), us).unwrap()
}

fn criterion_5(validity: &mut Validity) -> Outcome {
    let mut r = rng(1005);
    let mut worst: f64 = 0.0;
    let us = linspace(-3.0, 7.0, 21);
    for _ in 0..20 {
        let model = PhysicsModel::linear(r.gen_range(-1.5..0.5));
        let s = random_support(&mut r);
        let (a, b) = (random_piecewise(&mut r, s), random_stepped(&mut r, s, 20).to_piecewise());
        let (ab, bb) = (moving_map(a.clone()), moving_map(b.clone()));
        let g = unit_grid(10, us.clone());
        let opts = TraceOptions::default();
        let fa = solve_cdf_pde(&model, &const_map(a.clone()), &ab, &g, &opts).unwrap();
        let fb = solve_cdf_pde(&model, &const_map(b.clone()), &bb, &g, &opts).unwrap();
        validity.check(&fa, &us);
        validity.check(&fb, &us);
        let d0 = w1_distance(&a, &b);
        let w = solve_w1_pde(&model, &|_| d0, &|t| w1_distance(&ab(t), &bb(t)), &g, &opts).unwrap();
        for (it, ix) in g.nodes() {
            let direct = slice_distance(fa.slice(it, ix), fb.slice(it, ix), 0.0, 0.0).unwrap();
            let field = *w.get(it, ix);
            worst = worst.max((direct - field).abs() / field.max(1e-12));
        }
    }
    Outcome {
        pass: worst <= 1e-6,
        detail: format!("20 pairs x 100 nodes, max relative error {worst:.2e} <= 1e-6"),
    }
}

fn criterion_6(validity: &mut Validity) -> Outcome {
    let mut r = rng(1006);
    let us = linspace(-3.0, 5.0, 41);
    let nonlinear = PhysicsModel::nonlinear(
        Arc::new(|u: f64| 1.0 + 0.3 * u * u),
        Arc::new(|u: f64| -0.5 * u),
        Arc::new(|_| -0.5),
    );
    let (mut compared, mut violations) = (0, 0);
    let pair = |r: &mut ChaCha8Rng| {
        let s = random_support(r);
        let f = random_empirical(r, s, 10);
        let rho = f.upper_area() * r.gen_range(0.05..0.9);
        (f.to_piecewise(), upper_envelope_discrete(&f, rho).unwrap())
    };
    for k in 0..20 {
        let (lo, hi) = pair(&mut r);
        let (lob, hib) = pair(&mut r);
        let (model, maps) = if k % 2 == 0 {
            let model = PhysicsModel::linear(r.gen_range(-1.0..0.5));
            (model, [const_map(lo), moving_map(lob), const_map(hi), moving_map(hib)])
        } else {
            (nonlinear.clone(), [const_map(lo.clone()), const_map(lo), const_map(hi.clone()), const_map(hi)])
        };
        let g = unit_grid(10, us.clone());
        let opts = TraceOptions::default();
        let f_lo = solve_cdf_pde(&model, &maps[0], &maps[1], &g, &opts).unwrap();
        let f_hi = solve_cdf_pde(&model, &maps[2], &maps[3], &g, &opts).unwrap();
        validity.check(&f_lo, &us);
        validity.check(&f_hi, &us);
        for (it, ix) in g.nodes() {
            let (a, b) = (f_lo.slice(it, ix), f_hi.slice(it, ix));
            for &u in &us {
                compared += 1;
                violations += usize::from(a.eval(u).unwrap() > b.eval(u).unwrap() + 1e-12);
            }
        }
    }
    Outcome {
        pass: violations == 0,
        detail: format!("20 ordered pairs, {violations} violations in {compared} comparisons"),
    }
}

fn criterion_7(validity: &Validity) -> Outcome {
    Outcome {
        pass: validity.invalid == 0 && validity.checked > 0,
        detail: format!("{} invalid of {} propagated slices at tolerance 1e-12", validity.invalid, validity.checked),
    }
}

fn criterion_8(validity: &mut Validity) -> Outcome {
    let started = Instant::now();
    let (xs, ts) = (vec![0.25, 1.0, 1.75], vec![0.5, 1.0, 1.9]);
    let us = linspace(0.0, 3.0, 31);
    let g = SpaceTimeGrid::new(xs.clone(), ts.clone(), us.clone()).unwrap();
    let (f0, fb) = true_input_maps();
    let field = solve_cdf_pde(&example_model(-1.0).model, &f0, &fb, &g, &TraceOptions::default()).unwrap();
    validity.check(&field, &us);
    let mut worst: f64 = 0.0;
    for (it, ix) in g.nodes() {
        let mc = monte_carlo_cdf(100_000, xs[ix], ts[it], -1.0, 8 + (it * 3 + ix) as u64).unwrap();
        let exact = field.slice(it, ix).as_exact().expect("linear slices are exact");
        worst = worst.max(w1_distance(&mc, exact));
    }
    let secs = started.elapsed().as_secs_f64();
    Outcome {
        pass: worst <= 0.01 && secs <= 30.0,
        detail: format!("9 nodes, 1e5 draws each, max W1 {worst:.2e} <= 0.01, {secs:.2} s <= 30 s"),
    }
}

fn criterion_9() -> Outcome {
    let cfg = ExampleConfig {
        theta_r: -1.0,
        n_samples: 100,
        radius: RadiusSpec::relative(1.0, 3, 0.05, 1.0).unwrap(),
        seed: 2024,
        seeding: Seeding::Exact,
    };
    let axis = linspace(0.0, 2.0, 21);
    let rep = validate_containment(&cfg, 100, &axis, &axis).unwrap();
    Outcome {
        pass: rep.violation_count == 0 && rep.trials == 100,
        detail: format!(
            "100 trials x {} nodes, {} violations (ball {:.4}, band {:.4})",
            rep.nodes, rep.violation_count, rep.ball_containment_fraction, rep.band_containment_fraction
        ),
    }
}

fn criterion_10() -> Outcome {
    let a = RadiusSpec::relative(1.0, 3, 0.05, 1.0).unwrap();
    let b = RadiusSpec::relative(2.0, 1, 0.05, 1.0).unwrap();
    let ra = radius_ratio(&a, 25, 100).unwrap();
    let rb = radius_ratio(&b, 1, 16).unwrap();
    // the same ratios from the radii themselves
    let da = ambiguity_radius(&a, 25, 0.5).unwrap() / ambiguity_radius(&a, 100, 0.5).unwrap();
    let db = ambiguity_radius(&b, 1, 0.5).unwrap() / ambiguity_radius(&b, 16, 0.5).unwrap();
    let gap = [(ra - 4f64.cbrt()).abs(), (da - 4f64.cbrt()).abs(), (rb - 2.0).abs(), (db - 2.0).abs()]
        .into_iter()
        .fold(0.0, f64::max);
    Outcome {
        pass: gap <= 1e-12,
        detail: format!("25->100 (p=1, n=3) = {ra:.12}, 1->16 (p=2, n=1) = {rb:.12}, gap {gap:.1e} <= 1e-12"),
    }
}

fn any_cdf(r: &mut ChaCha8Rng) -> AnyCdf {
    let s = random_support(r);
    if r.gen_bool(0.5) {
        random_stepped(r, s, 20).into()
    } else {
        random_piecewise(r, s).into()
    }
}

fn level(f: &AnyCdf, r: &mut ChaCha8Rng) -> f64 {
    if r.gen_bool(0.3) {
        let knots = f.breakpoints();
        let t = knots[r.gen_range(0..knots.len())];
        let y = if r.gen_bool(0.5) { f.eval(t) } else { f.eval_left(t) };
        if y > 0.0 && y < 1.0 {
            return y;
        }
    }
    r.gen_range(1e-9..1.0 - 1e-9)
}

fn point(f: &AnyCdf, r: &mut ChaCha8Rng) -> f64 {
    let s = f.support();
    if r.gen_bool(0.3) {
        let knots = f.breakpoints();
        return knots[r.gen_range(0..knots.len())];
    }
    r.gen_range(s.lo() - 0.2..s.hi() + 0.2)
}

fn gap_integral(f: &AnyCdf, y: f64, t: f64, u: f64) -> f64 {
    if u >= t {
        y * (u - t) - f.integral(t, u)
    } else {
        -(y * (t - u) - f.integral(u, t))
    }
}

fn criterion_11() -> Outcome {
    let mut r = rng(1011);
    let mut failures = Vec::new();
    let mut record = |name: &str, ok: bool| {
        if !ok && !failures.contains(&name.to_string()) {
            failures.push(name.to_string());
        }
    };
    for _ in 0..1000 {
        let f = any_cdf(&mut r);
        let s = f.support();
        let (t, y) = (point(&f, &mut r), level(&f, &mut r));
        let gi = f.generalized_inverse(y).unwrap();
        let li = f.left_inverse(y).unwrap();
        record("below level => left of inverse", !(f.eval(t) < y) || t < gi);
        let (t1, t2) = {
            let u = point(&f, &mut r);
            (t.min(u), t.max(u))
        };
        record("bracketing", !(f.eval(t1) <= y) || t1 <= gi);
        record("bracketing", !(y <= f.eval(t2)) || li <= t2);
        record("left of inverse => below level", !(t < gi) || f.eval(t) <= y);
        record("left of inverse => below level", !(t < li) || f.eval(t) < y);
        let refl = reflect(&f, s).unwrap();
        let rhs = s.lo() + s.hi() - refl.left_inverse(y).unwrap();
        let lhs = f.generalized_inverse(1.0 - y).unwrap();
        record("inverse of reflection", (lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()));
        record("gap integral", (gap_integral(&f, y, t, li) - gap_integral(&f, y, t, gi)).abs() <= 1e-12);

        // flat stretch between consecutive atoms
        let g = random_stepped(&mut r, s, 20);
        let atoms: Vec<(f64, f64)> = g.atoms().collect();
        if atoms.len() >= 2 {
            let i = r.gen_range(0..atoms.len() - 1);
            let (a, b) = (atoms[i].0, atoms[i + 1].0);
            let (fa, fb) = (g.eval(a), g.eval(b));
            let y = fa + (fb - fa) * r.gen_range(1e-6..1.0);
            record("flat stretch => its end", g.left_inverse(y).unwrap() == b);
            record("flat stretch => its end", y >= fb || g.generalized_inverse(y).unwrap() == b);
        }
    }
    Outcome {
        pass: failures.is_empty(),
        detail: if failures.is_empty() {
            "six inverse identities on 1000 probes each, all hold within 1e-12".into()
        } else {
            format!("failing: {}", failures.join(", "))
        },
    }
}

#[test]
fn acceptance() {
    let mut validity = Validity::default();
    let mut results: Vec<(usize, &str, Outcome, f64)> = Vec::new();
    let mut run = |n: usize, name: &'static str, f: &mut dyn FnMut() -> Outcome| {
        let started = Instant::now();
        let o = f();
        results.push((n, name, o, started.elapsed().as_secs_f64()));
    };
    run(1, "envelope oracle equivalence", &mut || {
        let started = Instant::now();
        let mut o = criterion_1();
        let secs = started.elapsed().as_secs_f64();
        o.pass &= secs <= 10.0;
        o.detail += &format!(", {secs:.2} s <= 10 s");
        o
    });
    run(2, "single-atom envelopes", &mut criterion_2);
    run(3, "sandwich property", &mut criterion_3);
    run(4, "W1 transport closed form", &mut criterion_4);
    run(5, "W1 consistency", &mut || criterion_5(&mut validity));
    run(6, "monotone transport", &mut || criterion_6(&mut validity));
    run(8, "Monte Carlo cross-validation", &mut || criterion_8(&mut validity));
    run(7, "CDF validity", &mut || criterion_7(&validity));
    run(9, "containment mechanics", &mut criterion_9);
    run(10, "radius ratio law", &mut criterion_10);
    run(11, "inverse identities", &mut criterion_11);
    results.sort_by_key(|r| r.0);

    for (n, name, o, secs) in &results {
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("{tag} {n:>2} {name}: {} [{secs:.2} s]", o.detail);
    }
    let failed: Vec<usize> = results.iter().filter(|r| !r.2.pass).map(|r| r.0).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
