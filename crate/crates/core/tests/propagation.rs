mod common;

use std::sync::Arc;

use ambiflow::envelope::upper_envelope_discrete;
use ambiflow::numeric::linspace;
use ambiflow::propagation::*;
use ambiflow::scenario::{example_model, lb, l0};
use ambiflow::{w1_distance, Cdf, Error, PiecewiseCdf};
use common::*;
use rand::Rng;

fn grid(nx: usize, nt: usize, us: Vec<f64>) -> SpaceTimeGrid {
    SpaceTimeGrid::new(linspace(0.0, 2.0, nx), linspace(0.0, 2.0, nt), us).unwrap()
}

fn const_map(f: PiecewiseCdf) -> CdfMap {
    Arc::new(move |_| f.clone())
}

/// Boundary data that stretches and drifts with time.
fn moving_map(f: PiecewiseCdf) -> CdfMap {
    Arc::new(move |t: f64| f.push_affine(1.0 + 0.5 * (3.0 * t).sin().powi(2), 0.2 * t))
}

fn smooth_nonlinear() -> PhysicsModel {
    PhysicsModel::nonlinear(
        Arc::new(|u: f64| 1.0 + 0.3 * u * u),
        Arc::new(|u: f64| -0.5 * u),
        Arc::new(|_| -0.5),
    )
}

#[test]
fn radius_field_matches_closed_form() {
    let ex = example_model(-1.0);
    let eps = 0.1;
    let rho0 = l0() * eps;
    let g = grid(50, 50, vec![0.0]);
    let started = std::time::Instant::now();
    let w = solve_w1_pde(&ex.model, &|_| rho0, &|t| lb(t) * eps, &g, &TraceOptions::default()).unwrap();
    let elapsed = started.elapsed();
    for (x, t, v) in w.iter() {
        let want = if t < x {
            rho0 * (-t).exp()
        } else {
            lb(t - x) * eps * (-x).exp()
        };
        assert!((v - want).abs() <= 1e-10, "({x}, {t}): {v} vs {want}");
    }
    assert!(elapsed.as_secs_f64() < 1.0);
    // t = 0 row is the initial radius
    assert!(w.nodes[..50].iter().skip(1).all(|v| *v == rho0));
}

#[test]
fn propagated_slices_realize_the_discrepancy_field() {
    let mut r = rng(55);
    for _ in 0..20 {
        let theta = r.gen_range(-1.5..0.5);
        let model = PhysicsModel::linear(theta);
        let s = random_support(&mut r);
        let (a, b) = (random_piecewise(&mut r, s), random_stepped(&mut r, s, 20).to_piecewise());
        let (a0, b0) = (const_map(a.clone()), const_map(b.clone()));
        let (ab, bb) = (moving_map(a.clone()), moving_map(b.clone()));
        let g = grid(10, 10, vec![0.0]);
        let opts = TraceOptions::default();
        let fa = solve_cdf_pde(&model, &a0, &ab, &g, &opts).unwrap();
        let fb = solve_cdf_pde(&model, &b0, &bb, &g, &opts).unwrap();
        let d0 = w1_distance(&a, &b);
        let w = solve_w1_pde(&model, &|_| d0, &|t| w1_distance(&ab(t), &bb(t)), &g, &opts).unwrap();
        for (it, ix) in g.nodes() {
            let direct = slice_distance(fa.slice(it, ix), fb.slice(it, ix), 0.0, 0.0).unwrap();
            let field = *w.get(it, ix);
            assert!((direct - field).abs() <= 1e-6 * field.max(1e-12), "{direct} vs {field}");
        }
    }
}

fn ordered_pair(r: &mut rand_chacha::ChaCha8Rng) -> (PiecewiseCdf, PiecewiseCdf) {
    let s = random_support(r);
    let f = random_empirical(r, s, 10);
    let rho = f.upper_area() * r.gen_range(0.05..0.9);
    (f.to_piecewise(), upper_envelope_discrete(&f, rho).unwrap())
}

#[test]
fn ordering_survives_transport() {
    let mut r = rng(66);
    let us = linspace(-3.0, 5.0, 41);
    let mut violations = 0;
    for k in 0..20 {
        let (lo, hi) = ordered_pair(&mut r);
        let (lob, hib) = ordered_pair(&mut r);
        // with state-dependent speed the feeding input switches across u, so
        // nonlinear runs share one CDF between initial and boundary data
        let (model, maps) = if k % 2 == 0 {
            let model = PhysicsModel::linear(r.gen_range(-1.0..0.5));
            (model, [const_map(lo), moving_map(lob), const_map(hi), moving_map(hib)])
        } else {
            (smooth_nonlinear(), [const_map(lo.clone()), const_map(lo), const_map(hi.clone()), const_map(hi)])
        };
        let g = grid(10, 10, us.clone());
        let opts = TraceOptions::default();
        let f_lo = solve_cdf_pde(&model, &maps[0], &maps[1], &g, &opts).unwrap();
        let f_hi = solve_cdf_pde(&model, &maps[2], &maps[3], &g, &opts).unwrap();
        for (a, b) in f_lo.values.iter().zip(&f_hi.values) {
            if *a > b + 1e-12 {
                violations += 1;
            }
        }
        for (it, ix) in g.nodes() {
            assert!(slice_is_valid(f_lo.slice(it, ix), &us, 1e-12), "case {k}");
            assert!(slice_is_valid(f_hi.slice(it, ix), &us, 1e-12), "case {k}");
        }
    }
    assert_eq!(violations, 0);
}

#[test]
fn pointwise_bound_transport() {
    let mut r = rng(77);
    let s = random_support(&mut r);
    let (f1, f2) = (random_piecewise(&mut r, s), random_piecewise(&mut r, s));
    let (b1, b2) = (random_piecewise(&mut r, s), random_piecewise(&mut r, s));
    let model = PhysicsModel::linear(-0.7);
    let us = linspace(s.lo() - 0.5, s.hi() + 0.5, 25);
    let g = grid(8, 8, us.clone());
    let opts = TraceOptions::default();

    let zero = propagate_pointwise_bound(&model, &|_, _| 0.0, &|_, _| 0.0, &g, &opts).unwrap();
    assert!(zero.values.iter().all(|v| *v == 0.0));
    let one = propagate_pointwise_bound(&model, &|_, _| 1.0, &|_, _| 1.0, &g, &opts).unwrap();
    assert!(one.values.iter().all(|v| *v == 1.0));

    let (f1c, f2c, b1c, b2c) = (f1.clone(), f2.clone(), b1.clone(), b2.clone());
    let e = propagate_pointwise_bound(
        &model,
        &move |u, _| (f1c.eval(u) - f2c.eval(u)).abs(),
        &move |u, _| (b1c.eval(u) - b2c.eval(u)).abs(),
        &g,
        &opts,
    )
    .unwrap();
    let s1 = solve_cdf_pde(&model, &const_map(f1), &const_map(b1), &g, &opts).unwrap();
    let s2 = solve_cdf_pde(&model, &const_map(f2), &const_map(b2), &g, &opts).unwrap();
    for k in 0..e.values.len() {
        assert!((e.values[k] - (s1.values[k] - s2.values[k]).abs()).abs() <= 1e-10);
    }
}

#[test]
fn nonlinear_tracing_reproduces_linear_solution() {
    let lin = PhysicsModel::linear(-1.0);
    let as_nonlinear = PhysicsModel::nonlinear(lin.qdot.clone(), lin.r.clone(), lin.rdot.clone());
    let mut r = rng(88);
    let s = ambiflow::SupportInterval::new(0.0, 2.0).unwrap();
    let (f0, fb) = (random_piecewise(&mut r, s), random_piecewise(&mut r, s));
    let us = linspace(0.0, 2.0, 21);
    let g = grid(6, 6, us.clone());
    let opts = TraceOptions::default();
    let a = solve_cdf_pde(&lin, &const_map(f0.clone()), &const_map(fb.clone()), &g, &opts).unwrap();
    let b = solve_cdf_pde(&as_nonlinear, &const_map(f0), &const_map(fb), &g, &opts).unwrap();
    let mut mismatches = 0;
    for (x, y) in a.values.iter().zip(&b.values) {
        // states sitting exactly on a jump may land on either side after integration
        if (x - y).abs() > 1e-8 {
            mismatches += 1;
        }
    }
    assert!(mismatches <= a.values.len() / 50, "{mismatches} mismatches");
}

#[test]
fn ball_propagation_requires_linearity() {
    let model = smooth_nonlinear();
    let s = ambiflow::SupportInterval::new(0.0, 1.0).unwrap();
    let ball = ambiflow::ambiguity::AmbiguityBall {
        center: ambiflow::SteppedCdf::dirac(0.5, s).unwrap(),
        radius: 0.1,
        support: s,
    };
    let map: BallMap = Arc::new(move |_| ball.clone());
    let g = grid(3, 3, vec![0.0]);
    assert_eq!(
        propagate_ball(&model, &map, &map, &g, &TraceOptions::default()).unwrap_err(),
        Error::LinearityRequired
    );
    assert_eq!(
        solve_w1_pde(&model, &|_| 0.1, &|_| 0.1, &g, &TraceOptions::default()).unwrap_err(),
        Error::LinearityRequired
    );
}

#[test]
fn corner_precedence_selects_input() {
    let s = ambiflow::SupportInterval::new(0.0, 2.0).unwrap();
    let (f0, fb) = (PiecewiseCdf::dirac(0.5, s).unwrap(), PiecewiseCdf::dirac(1.5, s).unwrap());
    let g = SpaceTimeGrid::new(vec![1.0], vec![1.0], vec![1.0]).unwrap();
    let model = PhysicsModel::linear(0.0);
    let boundary = solve_cdf_pde(&model, &const_map(f0.clone()), &const_map(fb.clone()), &g, &TraceOptions::default())
        .unwrap();
    assert_eq!(boundary.values[0], 0.0);
    let opts = TraceOptions {
        corner: CornerPrecedence::Initial,
        ..TraceOptions::default()
    };
    let initial = solve_cdf_pde(&model, &const_map(f0), &const_map(fb), &g, &opts).unwrap();
    assert_eq!(initial.values[0], 1.0);
}

#[test]
fn results_do_not_depend_on_worker_count() {
    let mut r = rng(99);
    let s = random_support(&mut r);
    let (f0, fb) = (random_piecewise(&mut r, s), random_piecewise(&mut r, s));
    let us = linspace(s.lo(), s.hi() + 1.0, 17);
    let g = grid(12, 12, us);
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            let model = smooth_nonlinear();
            let opts = TraceOptions::default();
            let f = solve_cdf_pde(&model, &const_map(f0.clone()), &moving_map(fb.clone()), &g, &opts).unwrap();
            f.to_csv()
        })
    };
    assert_eq!(run(1), run(3));
}

#[test]
fn emitted_field_csv_round_trips() {
    let ex = example_model(-1.0);
    let g = grid(7, 5, vec![0.0]);
    let w = solve_w1_pde(&ex.model, &|_| 0.3, &|t| lb(t) * 0.1, &g, &TraceOptions::default()).unwrap();
    assert_eq!(ScalarField::from_csv(&w.to_csv("w")).unwrap(), w);
}
