//! Upper and lower CDF envelopes of a W1 ball (ambiguity bands).

use crate::ambiguity::AmbiguityBall;
use crate::cdf::{Cdf, PiecewiseCdf, Segment, SegmentKind, SteppedCdf, SupportInterval};
use crate::error::{Error, Result};

/// Which envelope to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Up,
    Low,
}

/// Index bookkeeping of the closed-form upper envelope.
///
/// Indices are 0-based with `t_0 = a` and `c_0 = 0`, so atom `i` of the
/// input is index `i` here (atoms numbered from 1).
#[derive(Debug, Clone, PartialEq)]
pub struct UpperConstruction {
    /// `j_1, ..., j_{kmax+1}`.
    pub j: Vec<usize>,
    /// `i_1, ..., i_{kmax}` followed by `N + 1`.
    pub i: Vec<usize>,
    /// `tau_l` for `l = i_1, ..., N`.
    pub tau: Vec<f64>,
    /// `y_l` for `l = 0, ..., j_{kmax+1} - 1`.
    pub y: Vec<f64>,
    pub cdf: PiecewiseCdf,
}

impl UpperConstruction {
    pub fn kmax(&self) -> usize {
        self.i.len() - 1
    }

    pub fn tau_at(&self, l: usize) -> f64 {
        self.tau[l - self.i[0]]
    }
}

struct Atoms {
    t: Vec<f64>,
    c: Vec<f64>,
    z: Vec<f64>,
}

impl Atoms {
    fn new(f: &SteppedCdf) -> Self {
        let a = f.support().lo();
        let mut t = vec![a];
        let mut c = vec![0.0];
        t.extend_from_slice(f.locations());
        c.extend_from_slice(f.masses());
        let mut z = Vec::with_capacity(c.len());
        let mut acc = 0.0;
        for &m in &c {
            acc += m;
            z.push(acc);
        }
        let last = z.len() - 1;
        z[last] = 1.0;
        Self { t, c, z }
    }

    fn n(&self) -> usize {
        self.t.len() - 1
    }

    /// `b(i, j) = sum_{k=j}^{i} (t_k - t_j) c_k`.
    fn b(&self, i: usize, j: usize) -> f64 {
        (j + 1..=i).map(|k| (self.t[k] - self.t[j]) * self.c[k]).sum()
    }

    /// `min { i in [from, N] : b(i, j) >= rho }`, scanning with a running sum.
    fn first_i(&self, from: usize, j: usize, rho: f64) -> usize {
        let mut acc = self.b(from - 1, j);
        for i in from..=self.n() {
            acc += (self.t[i] - self.t[j]) * self.c[i];
            if acc >= rho {
                return i;
            }
        }
        self.n()
    }
}

/// Closed-form upper envelope `sup { G(t) : W1(F, G) <= rho }` of a discrete CDF.
pub fn upper_envelope_discrete(f: &SteppedCdf, rho: f64) -> Result<PiecewiseCdf> {
    Ok(upper_envelope_construction(f, rho)?.cdf)
}

/// Same as [`upper_envelope_discrete`], also returning the index recursion.
pub fn upper_envelope_construction(f: &SteppedCdf, rho: f64) -> Result<UpperConstruction> {
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::Domain(format!("envelope radius rho = {rho} must be positive")));
    }
    let at = Atoms::new(f);
    let n = at.n();
    let bound = at.b(n, 0);
    if rho >= bound {
        return Err(Error::UninformativeBand { rho, bound });
    }

    let mut js = vec![0usize];
    let mut is = vec![at.first_i(1, 0, rho)];
    loop {
        let (jk, ik) = (*js.last().unwrap(), *is.last().unwrap());
        let mut jmax = jk;
        for j in jk + 1..=ik {
            if at.b(ik, j) >= rho {
                jmax = j;
            } else {
                break;
            }
        }
        let jn = jmax + 1;
        js.push(jn);
        if at.b(n, jn) <= rho {
            is.push(n + 1);
            break;
        }
        is.push(at.first_i(ik + 1, jn, rho));
    }

    let kmax = is.len() - 1;
    let mut tau = Vec::with_capacity(n + 1 - is[0]);
    let mut y = Vec::with_capacity(js[kmax]);
    for k in 0..kmax {
        let (jk, jn, ik, inx) = (js[k], js[k + 1], is[k], is[k + 1]);
        for l in ik..inx.min(n + 1) {
            let mass = at.z[l] - at.z[jn - 1];
            tau.push(at.t[jn] - (rho - at.b(l, jn)) / mass);
        }
        for l in jk..jn {
            y.push(at.z[ik - 1] + (rho - at.b(ik - 1, l)) / (at.t[ik] - at.t[l]));
        }
    }
    let tau_of = |l: usize| tau[l - is[0]];

    let mut b = SegmentBuilder::new(f.support().lo());
    for k in 0..kmax {
        let (jk, jn, ik, inx) = (js[k], js[k + 1], is[k], is[k + 1]);
        let pole = at.t[ik];
        for l in jk..jn {
            let end = if l + 1 < jn { at.t[l + 1] } else { tau_of(ik) };
            let amp = (y[l] - at.z[l]) * (pole - at.t[l]);
            b.hyperbolic(end, at.z[l], amp, pole);
        }
        let base = at.z[jn - 1];
        // the last block stops at tau_N, earlier blocks run on to t_{j_{k+1}}
        let stop = if k + 1 < kmax { inx } else { n };
        for l in ik..stop {
            let end = if l + 1 < inx { tau_of(l + 1) } else { at.t[jn] };
            let amp = (at.z[l] - base) * (at.t[l + 1] - tau_of(l));
            b.hyperbolic(end, base, amp, at.t[l + 1]);
        }
    }
    let cdf = PiecewiseCdf::new(f.support(), b.segments)?;
    Ok(UpperConstruction {
        j: js,
        i: is,
        tau,
        y,
        cdf,
    })
}

struct SegmentBuilder {
    cursor: f64,
    segments: Vec<Segment>,
}

impl SegmentBuilder {
    fn new(start: f64) -> Self {
        Self {
            cursor: start,
            segments: Vec::new(),
        }
    }

    fn hyperbolic(&mut self, end: f64, base: f64, amplitude: f64, pole: f64) {
        if end <= self.cursor {
            return;
        }
        let kind = if amplitude > 0.0 {
            SegmentKind::Hyperbolic {
                base,
                amplitude,
                pole,
            }
        } else {
            SegmentKind::Constant { value: base }
        };
        self.segments.push(Segment::new(self.cursor, end, kind));
        self.cursor = end;
    }
}

/// Lower envelope, the reflection of the upper envelope of the reflected CDF.
pub fn lower_envelope_discrete(f: &SteppedCdf, rho: f64) -> Result<PiecewiseCdf> {
    let s = f.support();
    let up = upper_envelope_discrete(&f.reflect(s), rho)?;
    up.reflect(s)
}

/// Envelope value at `t` by bisection on the defining area condition.
///
/// Works for any CDF and does not share code with the closed form.
pub fn envelope_oracle<F: Cdf + ?Sized>(f: &F, rho: f64, t: f64, side: Side) -> f64 {
    let s = f.support();
    match side {
        Side::Up => {
            if t < s.lo() {
                return 0.0;
            }
            let ft = f.eval(t);
            if ft >= 1.0 {
                return 1.0;
            }
            let area = |z: f64| {
                let end = if z >= 1.0 {
                    f.saturation_point()
                } else {
                    f.generalized_inverse(z).expect("level in [0, 1)")
                };
                if end <= t {
                    0.0
                } else {
                    z * (end - t) - f.integral(t, end)
                }
            };
            if area(1.0) <= rho {
                return 1.0;
            }
            let (mut lo, mut hi) = (ft, 1.0);
            while hi - lo > 1e-15 {
                let m = 0.5 * (lo + hi);
                if m <= lo || m >= hi {
                    break;
                }
                if area(m) <= rho {
                    lo = m;
                } else {
                    hi = m;
                }
            }
            lo
        }
        Side::Low => {
            if t >= s.hi() {
                return 1.0;
            }
            let ft = f.eval(t);
            if ft <= 0.0 {
                return 0.0;
            }
            let area = |z: f64| {
                let start = f.generalized_inverse(z).expect("level in [0, 1)");
                if start >= t {
                    0.0
                } else {
                    f.integral(start, t) - z * (t - start)
                }
            };
            if area(0.0) <= rho {
                return 0.0;
            }
            let (mut lo, mut hi) = (0.0, ft.min(1.0 - f64::EPSILON));
            if area(hi) > rho {
                return hi;
            }
            while hi - lo > 1e-15 {
                let m = 0.5 * (lo + hi);
                if m <= lo || m >= hi {
                    break;
                }
                if area(m) <= rho {
                    hi = m;
                } else {
                    lo = m;
                }
            }
            hi
        }
    }
}

/// Envelope of an arbitrary CDF, sampled from [`envelope_oracle`] and
/// interpolated linearly until the midpoint error is below `tol`.
///
/// The result is accurate to about `tol`, not exact; it is meant for
/// diagnostics on non-discrete inputs.
pub fn envelope_sampled<F: Cdf + ?Sized>(f: &F, rho: f64, side: Side, tol: f64) -> PiecewiseCdf {
    let s = f.support();
    let g = |t: f64| envelope_oracle(f, rho, t, side);
    let (a, b) = (s.lo(), s.hi());
    if s.is_degenerate() {
        return PiecewiseCdf::dirac(a, s).expect("point inside its support");
    }
    let mut knots = vec![(a, g(a))];
    // left limit at b for the lower side, where the envelope jumps to one
    let gb = match side {
        Side::Up => g(b),
        Side::Low => g(b - 1e-13 * (b - a)),
    };
    refine(&g, a, knots[0].1, b, gb, tol, 40, &mut knots);
    let mut segments = Vec::new();
    for w in knots.windows(2) {
        let ((t0, y0), (t1, y1)) = (w[0], w[1]);
        if t1 > t0 {
            segments.push(Segment::new(t0, t1, SegmentKind::Linear { y_start: y0, y_end: y1.max(y0) }));
        }
    }
    // trailing ones are implicit
    while let Some(last) = segments.last() {
        if last.value_start() >= 1.0 {
            segments.pop();
        } else {
            break;
        }
    }
    PiecewiseCdf::new(s, segments).expect("sampled envelope is a valid CDF")
}

#[allow(clippy::too_many_arguments)]
fn refine<G: Fn(f64) -> f64>(
    g: &G,
    t0: f64,
    y0: f64,
    t1: f64,
    y1: f64,
    tol: f64,
    depth: u32,
    out: &mut Vec<(f64, f64)>,
) {
    let tm = 0.5 * (t0 + t1);
    let ym = g(tm);
    let q1 = g(0.5 * (t0 + tm));
    let q3 = g(0.5 * (tm + t1));
    let lin = |t: f64| y0 + (y1 - y0) * (t - t0) / (t1 - t0);
    let err = (ym - lin(tm))
        .abs()
        .max((q1 - lin(0.5 * (t0 + tm))).abs())
        .max((q3 - lin(0.5 * (tm + t1))).abs());
    if depth == 0 || err <= tol {
        out.push((t1, y1));
        return;
    }
    refine(g, t0, y0, tm, ym, tol, depth - 1, out);
    refine(g, tm, ym, t1, y1, tol, depth - 1, out);
}

/// Pair of envelopes bracketing every CDF of a W1 ball.
#[derive(Debug, Clone, PartialEq)]
pub struct AmbiguityBand {
    pub lower: PiecewiseCdf,
    pub upper: PiecewiseCdf,
    pub rho: f64,
    pub support: SupportInterval,
    /// Set when at least one envelope saturated to a Dirac at the support edge.
    pub uninformative: bool,
}

impl AmbiguityBand {
    /// Band `[F, F]` around a single CDF.
    pub fn degenerate(f: PiecewiseCdf) -> Self {
        let support = f.support();
        Self {
            lower: f.clone(),
            upper: f,
            rho: 0.0,
            support,
            uninformative: false,
        }
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        use crate::cdf::AnyCdf;
        serde_json::json!({
            "rho": self.rho,
            "support": [self.support.lo(), self.support.hi()],
            "uninformative": self.uninformative,
            "lower": AnyCdf::from(self.lower.clone()).to_json_value(),
            "upper": AnyCdf::from(self.upper.clone()).to_json_value(),
        })
    }
}

/// Envelopes of a ball's center at its radius.
///
/// A side whose radius reaches the admissible bound saturates to the Dirac at
/// the corresponding support edge, which is the exact envelope there, and the
/// band is flagged uninformative.
pub fn band_from_ball(ball: &AmbiguityBall) -> AmbiguityBand {
    let s = ball.support;
    let rho = ball.radius;
    let center = ball
        .center
        .with_support(s)
        .unwrap_or_else(|_| ball.center.clone());
    if rho <= 0.0 || s.is_degenerate() {
        let mut band = AmbiguityBand::degenerate(center.to_piecewise());
        band.rho = rho.max(0.0);
        return band;
    }
    let mut uninformative = false;
    let upper = if rho < center.upper_area() {
        upper_envelope_discrete(&center, rho).expect("admissible radius")
    } else {
        uninformative = true;
        PiecewiseCdf::dirac(s.lo(), s).expect("edge of support")
    };
    let lower = if rho < center.lower_area() {
        lower_envelope_discrete(&center, rho).expect("admissible radius")
    } else {
        uninformative = true;
        PiecewiseCdf::dirac(s.hi(), s).expect("edge of support")
    };
    AmbiguityBand {
        lower,
        upper,
        rho,
        support: s,
        uninformative,
    }
}

const CONTAIN_TOL: f64 = 1e-10;

/// Points where three piecewise-monotone CDFs are compared: all breakpoints
/// plus a refinement of every gap between them.
pub fn comparison_points(cdfs: &[&dyn Cdf], refine: usize) -> Vec<f64> {
    let mut knots: Vec<f64> = cdfs.iter().flat_map(|f| f.breakpoints()).collect();
    knots.sort_by(f64::total_cmp);
    knots.dedup();
    let mut pts = Vec::with_capacity(knots.len() * (refine + 1));
    for w in knots.windows(2) {
        pts.push(w[0]);
        for k in 1..=refine {
            pts.push(w[0] + (w[1] - w[0]) * k as f64 / (refine + 1) as f64);
        }
    }
    if let Some(&last) = knots.last() {
        pts.push(last);
    }
    pts
}

/// `lower <= g <= upper` everywhere, within `1e-10`.
pub fn sandwiched(lower: &dyn Cdf, g: &dyn Cdf, upper: &dyn Cdf) -> bool {
    comparison_points(&[lower, g, upper], 4).into_iter().all(|t| {
        let (l, v, u) = (lower.eval(t), g.eval(t), upper.eval(t));
        let (ll, vl, ul) = (lower.eval_left(t), g.eval_left(t), upper.eval_left(t));
        l <= v + CONTAIN_TOL && v <= u + CONTAIN_TOL && ll <= vl + CONTAIN_TOL && vl <= ul + CONTAIN_TOL
    })
}

/// Whether `g` lies pointwise inside the band.
pub fn band_contains<G: Cdf + ?Sized>(band: &AmbiguityBand, g: &G) -> bool {
    let g = g.as_piecewise();
    sandwiched(&band.lower, &*g, &band.upper)
}
