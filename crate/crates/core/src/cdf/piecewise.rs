use std::borrow::Cow;

use super::{check_level_closed, check_level_open, Cdf, SupportInterval};
use crate::error::{Error, Result};

/// Shape of a CDF on one half-open interval `[start, end)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SegmentKind {
    Constant { value: f64 },
    /// Straight line from `y_start` at `start` to `y_end` at `end`.
    Linear { y_start: f64, y_end: f64 },
    /// `base + amplitude / (pole - t)`, with the pole outside `[start, end]`.
    Hyperbolic { base: f64, amplitude: f64, pole: f64 },
    /// `c0 + c1 u + c2 u^2` with `u = t - start`.
    Quadratic { c0: f64, c1: f64, c2: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub start: f64,
    pub end: f64,
    pub kind: SegmentKind,
}

/// `poly(u) + sum amplitude / (q - u)` on a local coordinate `u = t - origin`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct LocalForm {
    pub poly: [f64; 3],
    pub poles: [(f64, f64); 2],
    pub npoles: usize,
}

impl LocalForm {
    pub fn constant(v: f64) -> Self {
        Self {
            poly: [v, 0.0, 0.0],
            poles: [(0.0, 0.0); 2],
            npoles: 0,
        }
    }

    #[cfg(test)]
    pub fn value(&self, u: f64) -> f64 {
        let [c0, c1, c2] = self.poly;
        let mut v = c0 + u * (c1 + u * c2);
        for &(a, q) in &self.poles[..self.npoles] {
            v += a / (q - u);
        }
        v
    }

    /// `self - other`, merging poles at the same location.
    pub fn minus(&self, other: &LocalForm) -> LocalForm {
        let mut out = *self;
        for k in 0..3 {
            out.poly[k] -= other.poly[k];
        }
        for &(a, q) in &other.poles[..other.npoles] {
            if let Some(slot) = out.poles[..out.npoles].iter_mut().find(|p| p.1 == q) {
                slot.0 -= a;
            } else {
                out.poles[out.npoles] = (-a, q);
                out.npoles += 1;
            }
        }
        out
    }

    /// Exact `int_{u1}^{u2} value(u) du`.
    pub fn integral(&self, u1: f64, u2: f64) -> f64 {
        let [c0, c1, c2] = self.poly;
        let w = u2 - u1;
        let mut s = c0 * w + c1 * 0.5 * (u2 * u2 - u1 * u1) + c2 * (u2 * u2 * u2 - u1 * u1 * u1) / 3.0;
        for &(a, q) in &self.poles[..self.npoles] {
            if a != 0.0 {
                s += a * (w / (q - u2)).ln_1p();
            }
        }
        s
    }

    /// Polynomial whose roots away from the poles are the zeros of `value`.
    pub fn numerator(&self) -> Vec<f64> {
        use crate::numeric::{poly_add, poly_mul};
        let mut num = self.poly.to_vec();
        let poles: Vec<(f64, f64)> = self.poles[..self.npoles]
            .iter()
            .copied()
            .filter(|p| p.0 != 0.0)
            .collect();
        for &(_, q) in &poles {
            num = poly_mul(&num, &[q, -1.0]);
        }
        for (k, &(a, _)) in poles.iter().enumerate() {
            let mut term = vec![a];
            for (j, &(_, qj)) in poles.iter().enumerate() {
                if j != k {
                    term = poly_mul(&term, &[qj, -1.0]);
                }
            }
            num = poly_add(&num, &term);
        }
        num
    }
}

impl Segment {
    pub fn new(start: f64, end: f64, kind: SegmentKind) -> Self {
        Self { start, end, kind }
    }

    pub fn width(&self) -> f64 {
        self.end - self.start
    }

    /// Formula value at `t` (no clamping).
    pub fn value(&self, t: f64) -> f64 {
        match self.kind {
            SegmentKind::Constant { value } => value,
            SegmentKind::Linear { y_start, y_end } => {
                y_start + (y_end - y_start) * (t - self.start) / self.width()
            }
            SegmentKind::Hyperbolic {
                base,
                amplitude,
                pole,
            } => base + amplitude / (pole - t),
            SegmentKind::Quadratic { c0, c1, c2 } => {
                let u = t - self.start;
                c0 + u * (c1 + u * c2)
            }
        }
    }

    pub fn value_start(&self) -> f64 {
        match self.kind {
            SegmentKind::Linear { y_start, .. } => y_start,
            _ => self.value(self.start),
        }
    }

    /// Left limit at `end`.
    pub fn value_end(&self) -> f64 {
        match self.kind {
            SegmentKind::Linear { y_end, .. } => y_end,
            _ => self.value(self.end),
        }
    }

    pub(crate) fn local_form(&self, origin: f64) -> LocalForm {
        let d = origin - self.start;
        match self.kind {
            SegmentKind::Constant { value } => LocalForm::constant(value),
            SegmentKind::Linear { y_start, y_end } => {
                let slope = (y_end - y_start) / self.width();
                LocalForm {
                    poly: [y_start + slope * d, slope, 0.0],
                    ..LocalForm::constant(0.0)
                }
            }
            SegmentKind::Hyperbolic {
                base,
                amplitude,
                pole,
            } => LocalForm {
                poly: [base, 0.0, 0.0],
                poles: [(amplitude, pole - origin), (0.0, 0.0)],
                npoles: 1,
            },
            SegmentKind::Quadratic { c0, c1, c2 } => LocalForm {
                poly: [c0 + d * (c1 + d * c2), c1 + 2.0 * c2 * d, c2],
                ..LocalForm::constant(0.0)
            },
        }
    }

    /// `int_lo^hi value`, for `start <= lo <= hi <= end`.
    pub fn integral(&self, lo: f64, hi: f64) -> f64 {
        if hi <= lo {
            return 0.0;
        }
        self.local_form(lo).integral(0.0, hi - lo)
    }

    /// Solves `value(t) = y` for `value_start() <= y <= value_end()`.
    fn solve(&self, y: f64) -> f64 {
        let t = match self.kind {
            SegmentKind::Constant { .. } => self.start,
            SegmentKind::Linear { y_start, y_end } => {
                self.start + (y - y_start) / (y_end - y_start) * self.width()
            }
            SegmentKind::Hyperbolic {
                base,
                amplitude,
                pole,
            } => pole - amplitude / (y - base),
            SegmentKind::Quadratic { c0, c1, c2 } => self.start + solve_monotone_quadratic(c0 - y, c1, c2, self.width()),
        };
        t.clamp(self.start, self.end)
    }

    fn reflect(&self, s: f64) -> Segment {
        let (start, end) = (s - self.end, s - self.start);
        let kind = match self.kind {
            SegmentKind::Constant { value } => SegmentKind::Constant { value: 1.0 - value },
            SegmentKind::Linear { y_start, y_end } => SegmentKind::Linear {
                y_start: 1.0 - y_end,
                y_end: 1.0 - y_start,
            },
            SegmentKind::Hyperbolic {
                base,
                amplitude,
                pole,
            } => SegmentKind::Hyperbolic {
                base: 1.0 - base,
                amplitude,
                pole: s - pole,
            },
            SegmentKind::Quadratic { c0, c1, c2 } => {
                // q(L - u) expanded in the new local coordinate u
                let l = self.width();
                SegmentKind::Quadratic {
                    c0: 1.0 - (c0 + c1 * l + c2 * l * l),
                    c1: c1 + 2.0 * c2 * l,
                    c2: -c2,
                }
            }
        };
        Segment { start, end, kind }
    }

    fn push_affine(&self, scale: f64, shift: f64) -> Segment {
        let kind = match self.kind {
            SegmentKind::Hyperbolic {
                base,
                amplitude,
                pole,
            } => SegmentKind::Hyperbolic {
                base,
                amplitude: amplitude * scale,
                pole: scale * pole + shift,
            },
            SegmentKind::Quadratic { c0, c1, c2 } => SegmentKind::Quadratic {
                c0,
                c1: c1 / scale,
                c2: c2 / (scale * scale),
            },
            k => k,
        };
        Segment {
            start: scale * self.start + shift,
            end: scale * self.end + shift,
            kind,
        }
    }

    fn check(&self, tol: f64) -> Result<()> {
        if !(self.start < self.end) {
            return Err(Error::InvalidCdf(format!(
                "segment [{}, {}) is empty",
                self.start, self.end
            )));
        }
        let (v0, v1) = (self.value_start(), self.value_end());
        if !(v0.is_finite() && v1.is_finite()) {
            return Err(Error::InvalidCdf("segment value is not finite".into()));
        }
        if v0 < -tol || v1 > 1.0 + tol {
            return Err(Error::InvalidCdf(format!(
                "segment values [{v0}, {v1}] leave [0, 1]"
            )));
        }
        let monotone = match self.kind {
            SegmentKind::Constant { .. } => true,
            SegmentKind::Linear { y_start, y_end } => y_end >= y_start - tol,
            SegmentKind::Hyperbolic {
                amplitude, pole, ..
            } => {
                if pole >= self.start && pole <= self.end {
                    return Err(Error::InvalidCdf(format!(
                        "hyperbolic pole {pole} inside [{}, {}]",
                        self.start, self.end
                    )));
                }
                amplitude >= -tol
            }
            SegmentKind::Quadratic { c1, c2, .. } => {
                c1 >= -tol && c1 + 2.0 * c2 * self.width() >= -tol
            }
        };
        if !monotone {
            return Err(Error::InvalidCdf(format!(
                "segment [{}, {}) is decreasing",
                self.start, self.end
            )));
        }
        Ok(())
    }
}

/// Root in `[0, width]` of the non-decreasing `a + b u + c u^2`, with `a <= 0 <= value(width)`.
fn solve_monotone_quadratic(a: f64, b: f64, c: f64, width: f64) -> f64 {
    let f = |u: f64| a + u * (b + u * c);
    let candidate = if c == 0.0 {
        if b == 0.0 {
            0.0
        } else {
            -a / b
        }
    } else {
        let disc = (b * b - 4.0 * a * c).max(0.0);
        let q = -0.5 * (b + b.signum() * disc.sqrt());
        let mut roots = Vec::with_capacity(2);
        if q != 0.0 {
            roots.push(q / c);
            roots.push(a / q);
        } else {
            roots.push((-a / c).max(0.0).sqrt());
        }
        roots
            .into_iter()
            .filter(|r| r.is_finite())
            .min_by(|x, y| {
                let dx = (x.clamp(0.0, width) - x).abs();
                let dy = (y.clamp(0.0, width) - y).abs();
                dx.total_cmp(&dy).then(x.total_cmp(y))
            })
            .unwrap_or(0.0)
    };
    let u = candidate.clamp(0.0, width);
    if f(u).abs() <= 1e-14 {
        return u;
    }
    let (lo, hi) = (0.0, width);
    let flo = f(lo);
    if flo >= 0.0 {
        return lo;
    }
    if f(hi) <= 0.0 {
        return hi;
    }
    crate::numeric::bisect_sign_change(f, lo, hi, flo)
}

/// Exact CDF made of constant, linear, hyperbolic and quadratic pieces.
///
/// The CDF is zero before `support.lo()`, follows the segments (which tile
/// `[support.lo(), end)` without gaps), and equals one from `end` on.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseCdf {
    support: SupportInterval,
    segments: Vec<Segment>,
}

impl PiecewiseCdf {
    pub fn new(support: SupportInterval, segments: Vec<Segment>) -> Result<Self> {
        let tol = 1e-12;
        if let Some(first) = segments.first() {
            if first.start != support.lo() {
                return Err(Error::InvalidCdf(format!(
                    "first segment starts at {} instead of support.lo {}",
                    first.start,
                    support.lo()
                )));
            }
        }
        for (k, seg) in segments.iter().enumerate() {
            seg.check(tol)?;
            if k > 0 {
                let prev = &segments[k - 1];
                if prev.end != seg.start {
                    return Err(Error::InvalidCdf(format!(
                        "gap between segments at {} and {}",
                        prev.end, seg.start
                    )));
                }
                if seg.value_start() < prev.value_end() - tol {
                    return Err(Error::InvalidCdf(format!(
                        "CDF decreases at {}",
                        seg.start
                    )));
                }
            }
        }
        if let Some(last) = segments.last() {
            if last.end > support.hi() + support.tolerance() {
                return Err(Error::InvalidCdf(format!(
                    "segments extend to {} beyond support.hi {}",
                    last.end,
                    support.hi()
                )));
            }
        }
        Ok(Self { support, segments })
    }

    pub(crate) fn from_parts_unchecked(support: SupportInterval, segments: Vec<Segment>) -> Self {
        Self { support, segments }
    }

    /// Unit mass at `v` (no segments when `v` is the support's lower end).
    pub fn dirac(v: f64, support: SupportInterval) -> Result<Self> {
        if !support.contains(v) {
            return Err(Error::Domain(format!("Dirac location {v} outside support")));
        }
        let segments = if v > support.lo() {
            vec![Segment::new(support.lo(), v, SegmentKind::Constant { value: 0.0 })]
        } else {
            Vec::new()
        };
        Ok(Self { support, segments })
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// First point from which the CDF equals one.
    pub fn end(&self) -> f64 {
        self.segments.last().map_or(self.support.lo(), |s| s.end)
    }

    fn segment_index(&self, t: f64) -> Option<usize> {
        if t < self.support.lo() || t >= self.end() {
            return None;
        }
        Some(self.segments.partition_point(|s| s.start <= t) - 1)
    }

    /// Reflection `rc[1 - F(a + b - t)]` about the midpoint of `support`.
    pub fn reflect(&self, support: SupportInterval) -> Result<PiecewiseCdf> {
        let s = support.lo() + support.hi();
        let tol = support.tolerance();
        if self.support.lo() < support.lo() - tol || self.end() > support.hi() + tol {
            return Err(Error::Domain(
                "CDF is not supported inside the reflection interval".into(),
            ));
        }
        let mut segments: Vec<Segment> = self.segments.iter().rev().map(|g| g.reflect(s)).collect();
        let first_start = segments.first().map_or(s - self.support.lo(), |g| g.start);
        if first_start > support.lo() {
            segments.insert(
                0,
                Segment::new(support.lo(), first_start, SegmentKind::Constant { value: 0.0 }),
            );
        } else if let Some(first) = segments.first_mut() {
            // absorbs rounding in a + b - end
            first.start = support.lo();
        }
        if segments.is_empty() && s - self.support.lo() > support.lo() {
            segments.push(Segment::new(
                support.lo(),
                s - self.support.lo(),
                SegmentKind::Constant { value: 0.0 },
            ));
        }
        if let Some(last) = segments.last_mut() {
            // a tiling that started at lo must end exactly at hi
            if last.end > support.hi() || (self.support.lo() - support.lo()).abs() <= tol {
                last.end = support.hi();
            }
        }
        segments.retain(|g| g.start < g.end);
        Ok(Self {
            support,
            segments,
        })
    }

    /// Pushforward under `u -> scale * u + shift` with `scale > 0`.
    pub fn push_affine(&self, scale: f64, shift: f64) -> PiecewiseCdf {
        assert!(scale > 0.0, "pushforward scale must be positive");
        let mut segments: Vec<Segment> = self.segments.iter().map(|g| g.push_affine(scale, shift)).collect();
        // keep the tiling exact after rounding
        for k in 1..segments.len() {
            segments[k].start = segments[k - 1].end;
        }
        let support = self.support.push_affine(scale, shift);
        if let Some(first) = segments.first_mut() {
            first.start = support.lo();
        }
        segments.retain(|g| g.start < g.end);
        Self { support, segments }
    }

    /// Same segments on a wider support.
    pub fn with_support(&self, support: SupportInterval) -> Result<PiecewiseCdf> {
        let mut segments = self.segments.clone();
        if self.support.lo() > support.lo() {
            segments.insert(
                0,
                Segment::new(support.lo(), self.support.lo(), SegmentKind::Constant { value: 0.0 }),
            );
        }
        Self::new(support, segments)
    }

    /// Local form on an interval beginning at `origin` that contains no breakpoint.
    pub(crate) fn local_form_at(&self, origin: f64) -> LocalForm {
        match self.segment_index(origin) {
            Some(k) => self.segments[k].local_form(origin),
            None if origin < self.support.lo() => LocalForm::constant(0.0),
            None => LocalForm::constant(1.0),
        }
    }
}

impl Cdf for PiecewiseCdf {
    fn support(&self) -> SupportInterval {
        self.support
    }

    fn eval(&self, t: f64) -> f64 {
        if t < self.support.lo() {
            return 0.0;
        }
        match self.segment_index(t) {
            Some(k) => self.segments[k].value(t).clamp(0.0, 1.0),
            None => 1.0,
        }
    }

    fn eval_left(&self, t: f64) -> f64 {
        if t <= self.support.lo() {
            return 0.0;
        }
        if t > self.end() {
            return 1.0;
        }
        let k = self.segments.partition_point(|s| s.start < t) - 1;
        let seg = &self.segments[k];
        let v = if t == seg.end { seg.value_end() } else { seg.value(t) };
        v.clamp(0.0, 1.0)
    }

    fn generalized_inverse(&self, y: f64) -> Result<f64> {
        check_level_open(y)?;
        for seg in &self.segments {
            if seg.value_start() > y {
                return Ok(seg.start);
            }
            if seg.value_end() > y {
                return Ok(seg.solve(y));
            }
        }
        Ok(self.end())
    }

    fn left_inverse(&self, y: f64) -> Result<f64> {
        check_level_closed(y)?;
        for seg in &self.segments {
            if seg.value_start() >= y {
                return Ok(seg.start);
            }
            if seg.value_end() > y {
                return Ok(seg.solve(y));
            }
        }
        Ok(self.end())
    }

    fn integral(&self, lo: f64, hi: f64) -> f64 {
        if hi <= lo {
            return 0.0;
        }
        let mut total = 0.0;
        for seg in &self.segments {
            let (a, b) = (lo.max(seg.start), hi.min(seg.end));
            if a < b {
                total += seg.integral(a, b);
            }
        }
        let e = self.end();
        if hi > e {
            total += hi - lo.max(e);
        }
        total
    }

    fn breakpoints(&self) -> Vec<f64> {
        let mut b = Vec::with_capacity(self.segments.len() + 1);
        b.push(self.support.lo());
        b.extend(self.segments.iter().map(|s| s.end));
        b
    }

    fn saturation_point(&self) -> f64 {
        self.end()
    }

    fn as_piecewise(&self) -> Cow<'_, PiecewiseCdf> {
        Cow::Borrowed(self)
    }
}
