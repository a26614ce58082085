#![allow(dead_code)]

use ambiflow::numeric::adaptive_simpson;
use ambiflow::propagation::CdfSlice;
use ambiflow::{w1_distance, Cdf, PiecewiseCdf, Segment, SegmentKind, SteppedCdf, SupportInterval};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use ambiflow::scenario::seeded_rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    seeded_rng(seed, 0)
}

pub fn random_support(rng: &mut ChaCha8Rng) -> SupportInterval {
    let lo = rng.gen_range(-2.0..1.0);
    SupportInterval::new(lo, lo + rng.gen_range(0.5..3.0)).unwrap()
}

/// Discrete CDF with `1..=max_atoms` atoms of random masses inside `s`.
pub fn random_stepped(rng: &mut ChaCha8Rng, s: SupportInterval, max_atoms: usize) -> SteppedCdf {
    let mut locs: Vec<f64> = (0..rng.gen_range(1..=max_atoms)).map(|_| rng.gen_range(s.lo()..=s.hi())).collect();
    locs.sort_by(f64::total_cmp);
    locs.dedup();
    let n = locs.len();
    if rng.gen_bool(0.2) {
        locs[0] = s.lo();
    }
    if rng.gen_bool(0.2) {
        locs[n - 1] = s.hi();
    }
    let w: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = w.iter().sum();
    let atoms = locs.into_iter().zip(w.into_iter().map(|m| m / total)).collect();
    SteppedCdf::new(atoms, s).unwrap()
}

/// Empirical CDF of `n` uniform draws.
pub fn random_empirical(rng: &mut ChaCha8Rng, s: SupportInterval, n: usize) -> SteppedCdf {
    let v: Vec<f64> = (0..n).map(|_| rng.gen_range(s.lo()..=s.hi())).collect();
    SteppedCdf::from_samples(&v, s).unwrap()
}

/// Piecewise CDF mixing all segment kinds, with jumps between segments.
pub fn random_piecewise(rng: &mut ChaCha8Rng, s: SupportInterval) -> PiecewiseCdf {
    let k = rng.gen_range(1..=6);
    let mut knots: Vec<f64> = (0..k - 1).map(|_| rng.gen_range(s.lo()..s.hi())).collect();
    knots.push(s.lo());
    knots.push(if rng.gen_bool(0.7) { s.hi() } else { rng.gen_range(s.lo()..s.hi()) });
    knots.sort_by(f64::total_cmp);
    knots.dedup();
    let mut levels: Vec<f64> = (0..2 * (knots.len() - 1)).map(|_| rng.gen::<f64>()).collect();
    levels.sort_by(f64::total_cmp);
    let mut segs = Vec::new();
    for (j, w) in knots.windows(2).enumerate() {
        let (a, b) = (w[0], w[1]);
        if b - a < 1e-9 {
            continue;
        }
        let (lo, hi) = (levels[2 * j], levels[2 * j + 1]);
        let width = b - a;
        let kind = match rng.gen_range(0..4) {
            0 => SegmentKind::Constant { value: lo },
            1 => SegmentKind::Linear { y_start: lo, y_end: hi },
            2 => {
                let c1 = rng.gen::<f64>() * 2.0 * (hi - lo) / width;
                let c2 = (hi - lo - c1 * width) / (width * width);
                SegmentKind::Quadratic { c0: lo, c1, c2 }
            }
            _ => {
                let pole = b + rng.gen_range(0.05..2.0);
                let amplitude = (hi - lo) / (1.0 / (pole - b) - 1.0 / (pole - a));
                SegmentKind::Hyperbolic {
                    base: lo - amplitude / (pole - a),
                    amplitude,
                    pole,
                }
            }
        };
        let start = segs.last().map_or(s.lo(), |x: &Segment| x.end);
        segs.push(Segment::new(start, b, kind));
    }
    PiecewiseCdf::new(s, segs).unwrap()
}

/// `int_lo^hi |F - G|` by adaptive quadrature on the union of breakpoints.
pub fn w1_quadrature(f: &dyn Cdf, g: &dyn Cdf) -> f64 {
    let s = f.support().hull(&g.support());
    let mut knots: Vec<f64> = f.breakpoints().into_iter().chain(g.breakpoints()).collect();
    knots.push(s.lo());
    knots.push(s.hi());
    knots.retain(|k| *k >= s.lo() && *k <= s.hi());
    knots.sort_by(f64::total_cmp);
    knots.dedup();
    knots
        .windows(2)
        .map(|w| adaptive_simpson(&|t: f64| (f.eval(t) - g.eval(t)).abs(), w[0], w[1], 1e-13, 30))
        .sum()
}

/// Non-decreasing, zero below the support, one at its top (within `tol`).
pub fn is_valid_cdf(f: &dyn Cdf, tol: f64) -> bool {
    let s = f.support();
    let width = s.width().max(1e-9);
    let below = f.eval(s.lo() - 1e-9 * (1.0 + s.lo().abs())).abs() <= tol;
    let top = (f.eval(s.hi()) - 1.0).abs() <= tol;
    let mut prev = 0.0;
    let mut monotone = true;
    for k in 0..=2000 {
        let v = f.eval(s.lo() - 0.05 * width + 1.1 * width * k as f64 / 2000.0);
        monotone &= v >= prev - tol && (-tol..=1.0 + tol).contains(&v);
        prev = v;
    }
    below && top && monotone
}

/// Slice values on a state grid are non-decreasing with limits 0 and 1.
pub fn slice_is_valid(slice: &CdfSlice, us: &[f64], tol: f64) -> bool {
    if let Some(f) = slice.as_exact() {
        return is_valid_cdf(f, tol);
    }
    let v: Vec<f64> = us.iter().map(|&u| slice.eval(u).unwrap()).collect();
    v.windows(2).all(|w| w[1] >= w[0] - tol) && v.iter().all(|x| (-tol..=1.0 + tol).contains(x))
}

/// Convex combination `(1 - lam) F + lam G` of two discrete CDFs.
pub fn mix_stepped(f: &SteppedCdf, g: &SteppedCdf, lam: f64) -> SteppedCdf {
    let atoms = f
        .atoms()
        .map(|(t, m)| (t, (1.0 - lam) * m))
        .chain(g.atoms().map(|(t, m)| (t, lam * m)))
        .filter(|(_, m)| *m > 0.0)
        .collect::<Vec<_>>();
    let mut atoms = atoms;
    atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut merged: Vec<(f64, f64)> = Vec::new();
    for (t, m) in atoms {
        match merged.last_mut() {
            Some(last) if last.0 == t => last.1 += m,
            _ => merged.push((t, m)),
        }
    }
    let total: f64 = merged.iter().map(|a| a.1).sum();
    for a in &mut merged {
        a.1 /= total;
    }
    SteppedCdf::new(merged, f.support().hull(&g.support())).unwrap()
}

/// `int max(0, z - F)` to the right of `t`, summed over the steps of `F`.
pub fn area_right(f: &SteppedCdf, t: f64, z: f64) -> f64 {
    let atoms: Vec<(f64, f64)> = f.atoms().collect();
    let mut total = 0.0;
    let mut level = 0.0;
    let mut left = f64::NEG_INFINITY;
    for &(x, m) in &atoms {
        let (a, b) = (left.max(t), x);
        if b > a {
            total += (z - level).max(0.0) * (b - a);
        }
        level += m;
        left = x;
    }
    total
}

/// `int max(0, F - z)` to the left of `t`.
pub fn area_left(f: &SteppedCdf, t: f64, z: f64) -> f64 {
    let atoms: Vec<(f64, f64)> = f.atoms().collect();
    let mut total = 0.0;
    let mut level = 0.0;
    for (k, &(x, m)) in atoms.iter().enumerate() {
        level += m;
        let next = atoms.get(k + 1).map_or(f64::INFINITY, |a| a.0);
        let (a, b) = (x, next.min(t));
        if b > a {
            total += (level.min(1.0) - z).max(0.0) * (b - a);
        }
    }
    total
}

/// Largest level whose right area stays within `rho`.
pub fn upper_by_bisection(f: &SteppedCdf, rho: f64, t: f64) -> f64 {
    if t < f.support().lo() {
        return 0.0;
    }
    let (mut lo, mut hi) = (f.eval(t), 1.0);
    if area_right(f, t, 1.0) <= rho {
        return 1.0;
    }
    for _ in 0..200 {
        let m = 0.5 * (lo + hi);
        if area_right(f, t, m) <= rho {
            lo = m;
        } else {
            hi = m;
        }
    }
    lo
}

pub fn lower_by_bisection(f: &SteppedCdf, rho: f64, t: f64) -> f64 {
    if t >= f.support().hi() {
        return 1.0;
    }
    let (mut lo, mut hi) = (0.0, f.eval(t));
    if area_left(f, t, 0.0) <= rho {
        return 0.0;
    }
    for _ in 0..200 {
        let m = 0.5 * (lo + hi);
        if area_left(f, t, m) <= rho {
            hi = m;
        } else {
            lo = m;
        }
    }
    hi
}

/// CDFs within `rho` of `f`: mixtures toward random CDFs and small atom moves.
pub fn nearby(f: &SteppedCdf, rho: f64, r: &mut ChaCha8Rng) -> SteppedCdf {
    let s = f.support();
    if r.gen_bool(0.5) {
        let g = random_stepped(r, s, 20);
        let lam = (rho / w1_distance(f, &g).max(1e-300)).min(1.0) * r.gen_range(0.0..=1.0);
        mix_stepped(f, &g, lam)
    } else {
        // moving mass m by d costs m |d|
        let atoms: Vec<(f64, f64)> = f.atoms().collect();
        let mut budget = rho * r.gen_range(0.0..=1.0);
        let mut moved: Vec<(f64, f64)> = Vec::new();
        for &(t, m) in &atoms {
            let d = (budget / m).min(s.width()) * r.gen_range(0.0..=1.0);
            let nt = if r.gen_bool(0.5) { t + d } else { t - d }.clamp(s.lo(), s.hi());
            budget -= m * (nt - t).abs();
            moved.push((nt, m));
        }
        moved.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<(f64, f64)> = Vec::new();
        for (t, m) in moved {
            match merged.last_mut() {
                Some(l) if l.0 == t => l.1 += m,
                _ => merged.push((t, m)),
            }
        }
        SteppedCdf::new(merged, s).unwrap()
    }
}
