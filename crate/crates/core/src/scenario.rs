//! The advection-depletion example: `q(u) = u`, `r(u) = theta_r u` on `x >= 0`,
//! with `u0 = a1 + a2` and `ub(t) = a1 + a2 (1 + a3 sin 2 pi t)` driven by three
//! i.i.d. uniform parameters on `[0, 1]`.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ambiguity::{ambiguity_radius, AmbiguityBall, InputParameterization, ParameterModel, RadiusSpec};
use crate::cdf::{w1_distance, PiecewiseCdf, Segment, SegmentKind, SteppedCdf, SupportInterval};
use crate::envelope::{band_from_ball, sandwiched, AmbiguityBand};
use crate::error::{Error, Result};
use crate::propagation::{
    propagate_ball, propagate_band, solve_cdf_pde, BallMap, BandMap, CdfMap, PhysicsModel, SpaceTimeGrid, TraceOptions,
};

pub type Params = [f64; 3];

/// Model, input maps and parameter box of the example.
#[derive(Debug, Clone)]
pub struct Example {
    pub theta_r: f64,
    pub model: PhysicsModel,
    pub par: InputParameterization,
    pub pm: ParameterModel,
}

pub fn example_model(theta_r: f64) -> Example {
    Example {
        theta_r,
        model: PhysicsModel::linear(theta_r),
        par: InputParameterization {
            u0: Arc::new(|_, a| u0(a)),
            ub: Arc::new(|_, t, a| ub(t, a)),
            l0: Arc::new(|_| l0()),
            lb: Arc::new(|_, t| lb(t)),
        },
        pm: ParameterModel::from_box(vec![[0.0, 1.0]; 3]).expect("unit cube"),
    }
}

fn sin2pi(t: f64) -> f64 {
    (2.0 * PI * t).sin()
}

pub fn u0(a: &[f64]) -> f64 {
    a[0] + a[1]
}

pub fn ub(t: f64, a: &[f64]) -> f64 {
    a[0] + a[1] * (1.0 + a[2] * sin2pi(t))
}

pub fn l0() -> f64 {
    2f64.sqrt()
}

pub fn lb(t: f64) -> f64 {
    let s = sin2pi(t);
    (2.0 + 2.0 * s * s + 2.0 * s.max(0.0)).sqrt()
}

pub fn initial_support() -> SupportInterval {
    SupportInterval::new(0.0, 2.0).expect("valid")
}

pub fn boundary_support(t: f64) -> SupportInterval {
    SupportInterval::new(0.0, 2.0 + sin2pi(t).max(0.0)).expect("valid")
}

/// Support of the solution at `(x, t)`: the feeding input support scaled by the depletion factor.
pub fn solution_support(x: f64, t: f64, theta_r: f64) -> SupportInterval {
    if t < x {
        initial_support().push_affine((theta_r * t).exp(), 0.0)
    } else {
        boundary_support(t - x).push_affine((theta_r * x).exp(), 0.0)
    }
}

pub fn analytic_solution(x: f64, t: f64, a: &[f64], theta_r: f64) -> f64 {
    if t < x {
        u0(a) * (theta_r * t).exp()
    } else {
        ub(t - x, a) * (theta_r * x).exp()
    }
}

/// CDF of `a1 + a2`: triangular on `[0, 2]`.
pub fn true_input_cdf_u0() -> PiecewiseCdf {
    PiecewiseCdf::new(
        initial_support(),
        vec![
            Segment::new(0.0, 1.0, SegmentKind::Quadratic { c0: 0.0, c1: 0.0, c2: 0.5 }),
            Segment::new(1.0, 2.0, SegmentKind::Quadratic { c0: 0.5, c1: 1.0, c2: -0.5 }),
        ],
    )
    .expect("triangular CDF")
}

/// `int_{-inf}^y clamp(s, 0, 1) ds`.
fn ramp_primitive(y: f64) -> f64 {
    if y <= 0.0 {
        0.0
    } else if y <= 1.0 {
        0.5 * y * y
    } else {
        y - 0.5
    }
}

/// `P(a1 + a2 m <= v) = (C(v) - C(v - m)) / m` for a fixed slope `m > 0`.
fn fixed_slope_cdf(v: f64, m: f64) -> f64 {
    (ramp_primitive(v) - ramp_primitive(v - m)) / m
}

/// Exact CDF of `ub(tb)` at `v`, averaging over `m = 1 + a3 sin(2 pi tb)`.
pub fn true_boundary_cdf_value(tb: f64, v: f64) -> f64 {
    let s = sin2pi(tb);
    let top = 2.0 + s.max(0.0);
    if v <= 0.0 {
        return 0.0;
    }
    if v >= top {
        return 1.0;
    }
    if s.abs() < 1e-6 {
        return fixed_slope_cdf(v, 1.0 + 0.5 * s).clamp(0.0, 1.0);
    }
    let (m_lo, m_hi) = if s > 0.0 { (1.0, 1.0 + s) } else { (1.0 + s, 1.0) };
    let cv = ramp_primitive(v);
    let mut total = 0.0;
    // m > v: only C(v) survives
    let (a, b) = (m_lo.max(v), m_hi);
    if b > a {
        total += cv * (b / a).ln();
    }
    // v - 1 <= m <= v
    let (a, b) = (m_lo.max(v - 1.0), m_hi.min(v));
    if b > a {
        total += if v <= 1.0 {
            v * (b - a) - 0.25 * (b * b - a * a)
        } else {
            (v - 0.5 - 0.5 * v * v) * (b / a).ln() + v * (b - a) - 0.25 * (b * b - a * a)
        };
    }
    // m < v - 1: the ramp is saturated and the integrand is 1
    let (a, b) = (m_lo, m_hi.min(v - 1.0));
    if b > a {
        total += b - a;
    }
    (total / (m_hi - m_lo)).clamp(0.0, 1.0)
}

/// Piecewise-quadratic interpolant of a continuous CDF with forced knots,
/// refined until the interpolation error at quarter points is below `tol`.
pub fn tabulate_cdf(f: &dyn Fn(f64) -> f64, support: SupportInterval, knots: &[f64], tol: f64) -> PiecewiseCdf {
    let mut pts: Vec<f64> = knots
        .iter()
        .copied()
        .filter(|k| *k >= support.lo() && *k <= support.hi())
        .chain([support.lo(), support.hi()])
        .collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup_by(|b, a| *b - *a <= 1e-12 * (1.0 + a.abs()));
    if let Some(last) = pts.last_mut() {
        *last = support.hi();
    }
    let mut segments = Vec::new();
    for w in pts.windows(2) {
        fit(f, w[0], f(w[0]), w[1], f(w[1]), tol, 24, &mut segments);
    }
    while matches!(segments.last(), Some(s) if s.value_start() >= 1.0) {
        segments.pop();
    }
    for k in 1..segments.len() {
        let prev_end = segments[k - 1].end;
        segments[k].start = prev_end;
    }
    PiecewiseCdf::new(support, segments).expect("tabulated CDF is valid")
}

#[allow(clippy::too_many_arguments)]
fn fit(f: &dyn Fn(f64) -> f64, l: f64, yl: f64, r: f64, yr: f64, tol: f64, depth: u32, out: &mut Vec<Segment>) {
    let w = r - l;
    let m = l + 0.5 * w;
    if !(m > l && m < r) {
        out.push(Segment::new(l, r, SegmentKind::Linear { y_start: yl, y_end: yr.max(yl) }));
        return;
    }
    let ym = f(m);
    let c2 = 2.0 * (yr - 2.0 * ym + yl) / (w * w);
    let c1 = (yr - yl) / w - c2 * w;
    let q = |u: f64| yl + u * (c1 + u * c2);
    let err = (q(0.25 * w) - f(l + 0.25 * w))
        .abs()
        .max((q(0.75 * w) - f(l + 0.75 * w)).abs());
    // slopes of flat pieces carry rounding noise
    let monotone = c1 >= -1e-13 && c1 + 2.0 * c2 * w >= -1e-13;
    if err <= tol && monotone {
        out.push(Segment::new(l, r, SegmentKind::Quadratic { c0: yl, c1, c2 }));
        return;
    }
    if depth == 0 {
        out.push(Segment::new(l, r, SegmentKind::Linear { y_start: yl, y_end: yr.max(yl) }));
        return;
    }
    fit(f, l, yl, m, ym, tol, depth - 1, out);
    fit(f, m, ym, r, yr, tol, depth - 1, out);
}

/// Tabulated true CDF of `ub(tb)`, cached per `tb`.
pub fn true_boundary_cdf(tb: f64) -> PiecewiseCdf {
    static CACHE: OnceLock<Mutex<HashMap<u64, PiecewiseCdf>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(c) = cache.lock().expect("cache lock").get(&tb.to_bits()) {
        return c.clone();
    }
    let s = sin2pi(tb);
    let support = boundary_support(tb);
    let cdf = if s.abs() < 1e-6 {
        let m = 1.0 + 0.5 * s;
        tabulate_cdf(&|v| true_boundary_cdf_value(tb, v), support, &[0.0, 1.0, m, 1.0 + m], 1e-9)
    } else {
        let (m_lo, m_hi) = if s > 0.0 { (1.0, 1.0 + s) } else { (1.0 + s, 1.0) };
        let knots = [0.0, 1.0, m_lo, m_hi, 1.0 + m_lo, 1.0 + m_hi];
        tabulate_cdf(&|v| true_boundary_cdf_value(tb, v), support, &knots, 1e-9)
    };
    let mut guard = cache.lock().expect("cache lock");
    if guard.len() > 1024 {
        guard.clear();
    }
    guard.insert(tb.to_bits(), cdf.clone());
    cdf
}

/// `n` i.i.d. uniform parameter vectors from a seeded stream.
pub fn draw_parameters(rng: &mut ChaCha8Rng, n: usize) -> Vec<Params> {
    (0..n).map(|_| [rng.gen::<f64>(), rng.gen::<f64>(), rng.gen::<f64>()]).collect()
}

/// Generator for stream `stream` of `seed`.
pub fn seeded_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Empirical CDF of `M` exact solutions at `(x, t)`.
pub fn monte_carlo_cdf(m: usize, x: f64, t: f64, theta_r: f64, seed: u64) -> Result<SteppedCdf> {
    if m == 0 {
        return Err(Error::EmptySample);
    }
    let mut rng = seeded_rng(seed, 0);
    let values: Vec<f64> = draw_parameters(&mut rng, m)
        .iter()
        .map(|a| analytic_solution(x, t, a, theta_r))
        .collect();
    SteppedCdf::from_samples(&values, solution_support(x, t, theta_r))
}

/// How input radii are chosen in a containment experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Seeding {
    /// Radius equals the actual input distance to the true CDF.
    Exact,
    /// Larger of the actual distance and the nominal radius.
    #[default]
    Max,
    /// Nominal radius `L * eps_N` only.
    Nominal,
    Zero,
}

/// Empirical input CDFs of one parameter sample with their radii and bands.
pub struct ScenarioInputs {
    pub params: Vec<Params>,
    /// Parameter-space radius `eps_N`.
    pub eps: f64,
    pub seeding: Seeding,
    bands: Mutex<HashMap<u64, AmbiguityBand>>,
    distances: Mutex<HashMap<u64, f64>>,
}

impl ScenarioInputs {
    pub fn new(params: Vec<Params>, eps: f64, seeding: Seeding) -> Result<Self> {
        if params.is_empty() {
            return Err(Error::EmptySample);
        }
        Ok(Self {
            params,
            eps,
            seeding,
            bands: Mutex::new(HashMap::new()),
            distances: Mutex::new(HashMap::new()),
        })
    }

    pub fn center0(&self) -> SteppedCdf {
        let v: Vec<f64> = self.params.iter().map(|a| u0(a)).collect();
        SteppedCdf::from_samples(&v, initial_support()).expect("samples inside [0, 2]")
    }

    pub fn center_b(&self, tb: f64) -> SteppedCdf {
        let v: Vec<f64> = self.params.iter().map(|a| ub(tb, a)).collect();
        let s = boundary_support(tb);
        let clamped: Vec<f64> = v.iter().map(|x| x.clamp(s.lo(), s.hi())).collect();
        SteppedCdf::from_samples(&clamped, s).expect("samples inside the boundary support")
    }

    pub fn nominal0(&self) -> f64 {
        l0() * self.eps
    }

    pub fn nominal_b(&self, tb: f64) -> f64 {
        lb(tb) * self.eps
    }

    fn seeded(&self, nominal: f64, actual: impl FnOnce() -> f64) -> f64 {
        match self.seeding {
            Seeding::Exact => actual(),
            Seeding::Max => actual().max(nominal),
            Seeding::Nominal => nominal,
            Seeding::Zero => 0.0,
        }
    }

    pub fn distance0(&self) -> f64 {
        w1_distance(&self.center0(), &true_input_cdf_u0())
    }

    pub fn distance_b(&self, tb: f64) -> f64 {
        if let Some(d) = self.distances.lock().expect("distance cache").get(&tb.to_bits()) {
            return *d;
        }
        let d = w1_distance(&self.center_b(tb), &true_boundary_cdf(tb));
        self.distances.lock().expect("distance cache").insert(tb.to_bits(), d);
        d
    }

    pub fn ball0(&self) -> AmbiguityBall {
        let center = self.center0();
        let radius = self.seeded(self.nominal0(), || w1_distance(&center, &true_input_cdf_u0()));
        AmbiguityBall {
            center,
            radius,
            support: initial_support(),
        }
    }

    pub fn ball_b(&self, tb: f64) -> AmbiguityBall {
        let center = self.center_b(tb);
        let radius = self.seeded(self.nominal_b(tb), || self.distance_b(tb));
        AmbiguityBall {
            center,
            radius,
            support: boundary_support(tb),
        }
    }

    fn cached_band(&self, key: u64, make: impl FnOnce() -> AmbiguityBand) -> AmbiguityBand {
        if let Some(b) = self.bands.lock().expect("band cache").get(&key) {
            return b.clone();
        }
        let band = make();
        self.bands.lock().expect("band cache").insert(key, band.clone());
        band
    }

    pub fn band0(&self) -> AmbiguityBand {
        // NaN never collides with a boundary time
        self.cached_band(f64::NAN.to_bits(), || band_from_ball(&self.ball0()))
    }

    pub fn band_b(&self, tb: f64) -> AmbiguityBand {
        self.cached_band(tb.to_bits(), || band_from_ball(&self.ball_b(tb)))
    }

    pub fn ball_maps(self: &Arc<Self>) -> (BallMap, BallMap) {
        let ball0 = self.ball0();
        let me = self.clone();
        (Arc::new(move |_| ball0.clone()), Arc::new(move |tb| me.ball_b(tb)))
    }

    pub fn band_maps(self: &Arc<Self>) -> (BandMap, BandMap) {
        let (a, b) = (self.clone(), self.clone());
        (Arc::new(move |_| a.band0()), Arc::new(move |tb| b.band_b(tb)))
    }
}

/// Maps to the true input CDFs, for the CDF solver.
pub fn true_input_maps() -> (CdfMap, CdfMap) {
    let f0 = true_input_cdf_u0();
    (Arc::new(move |_| f0.clone()), Arc::new(true_boundary_cdf))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExampleConfig {
    pub theta_r: f64,
    pub n_samples: usize,
    pub radius: RadiusSpec,
    pub seed: u64,
    #[serde(default)]
    pub seeding: Seeding,
}

impl ExampleConfig {
    /// Parameter-space radius `eps_N(beta, rho_a)`.
    pub fn eps(&self) -> Result<f64> {
        ambiguity_radius(&self.radius, self.n_samples, example_model(self.theta_r).pm.rho_a)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub trial: u64,
    pub x: f64,
    pub t: f64,
    /// `"ball"` or `"band"`.
    pub kind: String,
    /// Whether the input feeding this node was inside its ambiguity set.
    pub input_contained: bool,
    /// W1 from center to truth (ball) or 0 (band).
    pub distance: f64,
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContainmentReport {
    pub trials: usize,
    pub nodes: usize,
    pub seeding: Seeding,
    pub eps: f64,
    pub containment_fraction: f64,
    pub ball_containment_fraction: f64,
    pub band_containment_fraction: f64,
    pub violation_count: usize,
    /// Failures at nodes whose input was contained: must be zero.
    pub mechanism_violations: usize,
    pub input_containment_trials: usize,
    pub violations: Vec<Violation>,
}

impl ContainmentReport {
    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }
}

const MAX_LISTED: usize = 200;

struct TrialOutcome {
    ok_both: usize,
    ok_ball: usize,
    ok_band: usize,
    mechanism: usize,
    inputs_contained: bool,
    violations: Vec<Violation>,
    violation_count: usize,
}

/// Runs `trials` independent sample draws and checks that the propagated
/// true CDF stays inside the propagated ball and band at every grid node.
pub fn validate_containment(cfg: &ExampleConfig, trials: usize, xs: &[f64], ts: &[f64]) -> Result<ContainmentReport> {
    if trials == 0 {
        return Err(Error::Domain("invalid trials: at least one trial is required".into()));
    }
    if cfg.n_samples == 0 {
        return Err(Error::EmptySample);
    }
    let eps = cfg.eps()?;
    let grid = SpaceTimeGrid::new(xs.to_vec(), ts.to_vec(), vec![0.0])?;
    let ex = example_model(cfg.theta_r);
    let opts = TraceOptions::default();
    let (t0, tb) = true_input_maps();
    let truth = solve_cdf_pde(&ex.model, &t0, &tb, &grid, &opts)?;

    let outcomes = (0..trials as u64)
        .into_par_iter()
        .map(|trial| -> Result<TrialOutcome> {
            let mut rng = seeded_rng(cfg.seed, trial);
            let params = draw_parameters(&mut rng, cfg.n_samples);
            let inputs = Arc::new(ScenarioInputs::new(params, eps, cfg.seeding)?);
            let (b0, bb) = inputs.ball_maps();
            let (n0, nb) = inputs.band_maps();
            let balls = propagate_ball(&ex.model, &b0, &bb, &grid, &opts)?;
            let bands = propagate_band(&ex.model, &n0, &nb, &grid, &opts)?;

            let d0 = inputs.distance0();
            let r0 = b0(0.0).radius;
            let mut inputs_contained = true;
            let mut out = TrialOutcome {
                ok_both: 0,
                ok_ball: 0,
                ok_band: 0,
                mechanism: 0,
                inputs_contained: true,
                violations: Vec::new(),
                violation_count: 0,
            };
            for (it, &t) in grid.ts.iter().enumerate() {
                for (ix, &x) in grid.xs.iter().enumerate() {
                    let (d_in, r_in) = if t < x || (t == 0.0) {
                        (d0, r0)
                    } else {
                        let tb = t - x;
                        (inputs.distance_b(tb), bb(tb).radius)
                    };
                    let input_ok = d_in <= r_in * (1.0 + 1e-12) + 1e-15;
                    inputs_contained &= input_ok;

                    let truth_slice = truth.slice(it, ix).as_exact().expect("linear model slices are exact");
                    let ball = balls.get(it, ix);
                    let d = w1_distance(&ball.center, truth_slice);
                    let ball_ok = d <= ball.radius * (1.0 + 1e-9) + 1e-12;
                    let band = bands.get(it, ix);
                    let (lo, up) = (
                        band.lower.as_exact().expect("exact"),
                        band.upper.as_exact().expect("exact"),
                    );
                    let band_ok = sandwiched(lo, truth_slice, up);

                    out.ok_ball += ball_ok as usize;
                    out.ok_band += band_ok as usize;
                    out.ok_both += (ball_ok && band_ok) as usize;
                    for (ok, kind) in [(ball_ok, "ball"), (band_ok, "band")] {
                        if ok {
                            continue;
                        }
                        out.violation_count += 1;
                        if input_ok {
                            out.mechanism += 1;
                        }
                        if out.violations.len() < MAX_LISTED {
                            out.violations.push(Violation {
                                trial,
                                x,
                                t,
                                kind: kind.into(),
                                input_contained: input_ok,
                                distance: if kind == "ball" { d } else { 0.0 },
                                radius: if kind == "ball" { ball.radius } else { band.input_rho },
                            });
                        }
                    }
                }
            }
            out.inputs_contained = inputs_contained;
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;

    let nodes = grid.xs.len() * grid.ts.len();
    let total = (nodes * trials) as f64;
    let mut violations: Vec<Violation> = outcomes.iter().flat_map(|o| o.violations.iter().cloned()).collect();
    violations.truncate(MAX_LISTED);
    Ok(ContainmentReport {
        trials,
        nodes,
        seeding: cfg.seeding,
        eps,
        containment_fraction: outcomes.iter().map(|o| o.ok_both).sum::<usize>() as f64 / total,
        ball_containment_fraction: outcomes.iter().map(|o| o.ok_ball).sum::<usize>() as f64 / total,
        band_containment_fraction: outcomes.iter().map(|o| o.ok_band).sum::<usize>() as f64 / total,
        violation_count: outcomes.iter().map(|o| o.violation_count).sum(),
        mechanism_violations: outcomes.iter().map(|o| o.mechanism).sum(),
        input_containment_trials: outcomes.iter().filter(|o| o.inputs_contained).count(),
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cdf::Cdf;

    #[test]
    fn lipschitz_constants() {
        assert!((lb(0.0) - 2f64.sqrt()).abs() < 1e-15);
        assert!((lb(0.25) - 6f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn triangular_values() {
        let f = true_input_cdf_u0();
        assert_eq!(f.eval(1.0), 0.5);
        assert_eq!(f.eval(0.5), 0.125);
        assert_eq!(f.eval(2.0), 1.0);
    }

    #[test]
    fn boundary_cdf_reduces_to_triangle() {
        let tri = true_input_cdf_u0();
        for v in [0.1, 0.7, 1.0, 1.4, 1.9] {
            assert!((true_boundary_cdf_value(0.0, v) - tri.eval(v)).abs() < 1e-15);
            assert!((true_boundary_cdf_value(0.5, v) - tri.eval(v)).abs() < 1e-12);
        }
    }

    #[test]
    fn boundary_cdf_matches_quadrature_over_slope() {
        for tb in [0.1, 0.25, 0.6, 0.75, 0.9] {
            let s = sin2pi(tb);
            let (m_lo, m_hi) = if s > 0.0 { (1.0, 1.0 + s) } else { (1.0 + s, 1.0) };
            for v in [0.05f64, 0.3, 0.9, 1.2, 1.7, 2.3] {
                let direct = crate::numeric::adaptive_simpson(
                    &|m: f64| if m <= 0.0 { v.clamp(0.0, 1.0) } else { fixed_slope_cdf(v, m) },
                    m_lo,
                    m_hi,
                    1e-13,
                    40,
                ) / (m_hi - m_lo);
                let exact = true_boundary_cdf_value(tb, v);
                assert!((direct.min(1.0) - exact).abs() < 1e-9, "tb {tb} v {v}: {direct} vs {exact}");
            }
        }
    }

    #[test]
    fn tabulated_boundary_cdf_is_close() {
        for tb in [0.0, 0.25, 0.75, 0.33] {
            let f = true_boundary_cdf(tb);
            for k in 0..=300 {
                let v = 3.1 * k as f64 / 300.0;
                assert!((f.eval(v) - true_boundary_cdf_value(tb, v)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn tabulation_stays_small() {
        for tb in crate::numeric::linspace(0.0, 2.0, 81) {
            let n = true_boundary_cdf(tb).segments().len();
            assert!(n < 1500, "tb {tb}: {n} segments");
        }
    }

    #[test]
    fn analytic_solution_regions() {
        let a = [0.5, 0.5, 0.3];
        assert!((analytic_solution(2.0, 1.0, &a, -1.0) - (-1f64).exp()).abs() < 1e-15);
        assert_eq!(analytic_solution(0.4, 0.0, &a, -1.0), 1.0);
        assert_eq!(analytic_solution(0.3, 0.8, &a, 0.0), ub(0.5, &a));
    }

    #[test]
    fn single_draw_is_dirac() {
        let m = monte_carlo_cdf(1, 1.0, 0.5, -1.0, 9).unwrap();
        assert_eq!(m.len(), 1);
        let mut rng = seeded_rng(9, 0);
        let a = draw_parameters(&mut rng, 1)[0];
        assert_eq!(m.locations()[0], analytic_solution(1.0, 0.5, &a, -1.0));
    }
}
