use super::Cdf;
use crate::numeric::poly_roots_in;

/// Exact `W1 = int |F - G|`.
///
/// Both CDFs are cut at the union of their breakpoints; on each piece the
/// difference is a low-degree rational function whose sign changes are found
/// from its numerator polynomial, and each sign-definite piece is integrated
/// in closed form.
pub fn w1_distance<F: Cdf + ?Sized, G: Cdf + ?Sized>(f: &F, g: &G) -> f64 {
    let (pf, pg) = (f.as_piecewise(), g.as_piecewise());
    let mut knots = pf.breakpoints();
    knots.extend(pg.breakpoints());
    knots.sort_by(f64::total_cmp);
    knots.dedup();

    let mut total = 0.0;
    for w in knots.windows(2) {
        let (l, r) = (w[0], w[1]);
        let width = r - l;
        if width <= 0.0 {
            continue;
        }
        let d = pf.local_form_at(l).minus(&pg.local_form_at(l));
        let mut cuts = vec![0.0];
        cuts.extend(poly_roots_in(&d.numerator(), 0.0, width));
        cuts.push(width);
        for c in cuts.windows(2) {
            total += d.integral(c[0], c[1]).abs();
        }
    }
    total
}
