//! Small numerical kernels shared by the CDF algebra and the solvers.

/// Formats a float with 17 significant digits, enough to round-trip any `f64`.
pub fn fmt17(v: f64) -> String {
    format!("{:.16e}", v)
}

/// Evaluates a polynomial with coefficients in ascending order.
pub fn poly_eval(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

fn poly_derivative(coeffs: &[f64]) -> Vec<f64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| c * k as f64)
        .collect()
}

/// Product of two polynomials in ascending coefficient order.
pub fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn poly_add(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|k| a.get(k).copied().unwrap_or(0.0) + b.get(k).copied().unwrap_or(0.0))
        .collect()
}

/// Real roots of a polynomial strictly inside `(lo, hi)`.
///
/// The interval is split at the critical points (found recursively from the
/// derivative), so the polynomial is monotone on each piece and each sign
/// change holds exactly one root, located by bisection to machine precision.
pub fn poly_roots_in(coeffs: &[f64], lo: f64, hi: f64) -> Vec<f64> {
    let mut c = coeffs.to_vec();
    while matches!(c.last(), Some(&x) if x == 0.0) {
        c.pop();
    }
    if c.len() <= 1 || hi <= lo {
        return Vec::new();
    }
    if c.len() == 2 {
        let r = -c[0] / c[1];
        return if r > lo && r < hi { vec![r] } else { Vec::new() };
    }
    let mut knots = vec![lo];
    knots.extend(poly_roots_in(&poly_derivative(&c), lo, hi));
    knots.push(hi);

    let mut roots = Vec::new();
    for w in knots.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (fa, fb) = (poly_eval(&c, a), poly_eval(&c, b));
        if fa == 0.0 {
            if a > lo && roots.last() != Some(&a) {
                roots.push(a);
            }
            continue;
        }
        if fa * fb < 0.0 {
            roots.push(bisect_sign_change(|x| poly_eval(&c, x), a, b, fa));
        }
    }
    roots
}

/// Bisection on a bracket where `f(a)` has sign of `fa` and `f(b)` the opposite.
pub fn bisect_sign_change<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, fa: f64) -> f64 {
    let positive_left = fa > 0.0;
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fm > 0.0) == positive_left {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Adaptive Simpson quadrature with absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, max_depth: u32) -> f64 {
    if b <= a {
        return 0.0;
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Evenly spaced points including both ends.
pub fn linspace(start: f64, stop: f64, num: usize) -> Vec<f64> {
    match num {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..num)
            .map(|k| start + (stop - start) * k as f64 / (num - 1) as f64)
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_of_cubic_with_three_real_roots() {
        // (x - 0.2)(x - 0.5)(x - 0.9)
        let c = poly_mul(&poly_mul(&[-0.2, 1.0], &[-0.5, 1.0]), &[-0.9, 1.0]);
        let r = poly_roots_in(&c, 0.0, 1.0);
        assert_eq!(r.len(), 3);
        for (got, want) in r.iter().zip([0.2, 0.5, 0.9]) {
            assert!((got - want).abs() < 1e-14, "{got} vs {want}");
        }
    }

    #[test]
    fn roots_excludes_endpoints_and_outside() {
        let c = [-1.0, 1.0];
        assert!(poly_roots_in(&c, 1.0, 2.0).is_empty());
        assert!(poly_roots_in(&[0.0, 0.0, 0.0], 0.0, 1.0).is_empty());
        assert!(poly_roots_in(&[1.0, 0.0, 1.0], -5.0, 5.0).is_empty());
    }

    #[test]
    fn quartic_double_root_is_not_a_sign_change() {
        // (x - 0.5)^2 (x - 0.7)(x + 3)
        let c = poly_mul(
            &poly_mul(&[-0.5, 1.0], &[-0.5, 1.0]),
            &poly_mul(&[-0.7, 1.0], &[3.0, 1.0]),
        );
        let r = poly_roots_in(&c, 0.0, 1.0);
        assert!(r.iter().any(|x| (x - 0.7).abs() < 1e-13));
    }

    #[test]
    fn simpson_integrates_kink() {
        let v = adaptive_simpson(&|x: f64| (x - 0.3).abs(), 0.0, 1.0, 1e-12, 50);
        assert!((v - (0.045 + 0.245)).abs() < 1e-10);
    }

    #[test]
    fn fmt17_round_trips() {
        for v in [0.1, 1.0 / 3.0, -2.5e-300, 123456.789] {
            assert_eq!(fmt17(v).parse::<f64>().unwrap(), v);
        }
    }
}
