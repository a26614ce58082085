use std::borrow::Cow;

use super::piecewise::{PiecewiseCdf, Segment, SegmentKind};
use super::{check_level_closed, check_level_open, Cdf, SupportInterval};
use crate::error::{Error, Result};

/// CDF of a discrete distribution: finitely many atoms with positive masses.
#[derive(Debug, Clone, PartialEq)]
pub struct SteppedCdf {
    locs: Vec<f64>,
    masses: Vec<f64>,
    /// Running mass, `cum[i] = c_1 + ... + c_{i+1}`, with the last entry pinned to 1.
    cum: Vec<f64>,
    /// Running first moment `sum c_k t_k`.
    moment: Vec<f64>,
    support: SupportInterval,
}

const MASS_TOL: f64 = 1e-12;

impl SteppedCdf {
    /// Builds a stepped CDF from `(location, mass)` pairs.
    ///
    /// Locations must be strictly increasing and inside `support`; masses must
    /// be positive and sum to one within `1e-12`.
    pub fn new(atoms: Vec<(f64, f64)>, support: SupportInterval) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::EmptySample);
        }
        let tol = support.tolerance();
        let mut total = 0.0;
        for (k, &(t, c)) in atoms.iter().enumerate() {
            if !(t.is_finite() && c.is_finite()) {
                return Err(Error::InvalidCdf(format!("atom {k} is not finite")));
            }
            if c <= 0.0 {
                return Err(Error::InvalidCdf(format!("atom {k} has non-positive mass {c}")));
            }
            if t < support.lo() - tol || t > support.hi() + tol {
                return Err(Error::Domain(format!(
                    "atom {t} outside support [{}, {}]",
                    support.lo(),
                    support.hi()
                )));
            }
            if k > 0 && t <= atoms[k - 1].0 {
                return Err(Error::InvalidCdf("atom locations must be strictly increasing".into()));
            }
            total += c;
        }
        if (total - 1.0).abs() > MASS_TOL {
            return Err(Error::InvalidCdf(format!("masses sum to {total}, expected 1")));
        }
        Ok(Self::from_sorted_unchecked(atoms, support))
    }

    fn from_sorted_unchecked(atoms: Vec<(f64, f64)>, support: SupportInterval) -> Self {
        let (locs, masses): (Vec<f64>, Vec<f64>) = atoms.into_iter().unzip();
        let mut cum = Vec::with_capacity(locs.len());
        let mut moment = Vec::with_capacity(locs.len());
        let (mut acc, mut mom) = (0.0, 0.0);
        for (&t, &c) in locs.iter().zip(&masses) {
            acc += c;
            mom += c * t;
            cum.push(acc);
            moment.push(mom);
        }
        if let Some(last) = cum.last_mut() {
            *last = 1.0;
        }
        Self {
            locs,
            masses,
            cum,
            moment,
            support,
        }
    }

    /// Empirical CDF of a sample: sorted distinct values, each with mass
    /// multiplicity / N.
    pub fn from_samples(values: &[f64], support: SupportInterval) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySample);
        }
        if let Some(v) = values.iter().find(|v| !support.contains(**v)) {
            return Err(Error::Domain(format!(
                "sample {v} outside support [{}, {}]",
                support.lo(),
                support.hi()
            )));
        }
        let mut sorted = values.to_vec();
        sorted.sort_by(|a, b| a.total_cmp(b));
        let n = sorted.len() as f64;
        let mut atoms: Vec<(f64, f64)> = Vec::new();
        let mut k = 0;
        while k < sorted.len() {
            let v = sorted[k];
            let run = sorted[k..].iter().take_while(|&&w| w == v).count();
            atoms.push((v, run as f64 / n));
            k += run;
        }
        Ok(Self::from_sorted_unchecked(atoms, support))
    }

    /// Unit mass at `v`.
    pub fn dirac(v: f64, support: SupportInterval) -> Result<Self> {
        Self::new(vec![(v, 1.0)], support)
    }

    pub fn len(&self) -> usize {
        self.locs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.locs.is_empty()
    }

    pub fn locations(&self) -> &[f64] {
        &self.locs
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn atoms(&self) -> impl DoubleEndedIterator<Item = (f64, f64)> + ExactSizeIterator + '_ {
        self.locs.iter().copied().zip(self.masses.iter().copied())
    }

    /// Reflection `rc[1 - F(a + b - t)]`: atoms mirror around the support midpoint.
    pub fn reflect(&self, support: SupportInterval) -> SteppedCdf {
        let s = support.lo() + support.hi();
        let atoms = self.atoms().rev().map(|(t, c)| (s - t, c)).collect();
        Self::from_sorted_unchecked(atoms, support)
    }

    /// Pushforward under `u -> scale * u + shift` with `scale > 0`.
    pub fn push_affine(&self, scale: f64, shift: f64) -> SteppedCdf {
        assert!(scale > 0.0, "pushforward scale must be positive");
        let atoms = self.atoms().map(|(t, c)| (scale * t + shift, c)).collect();
        Self::from_sorted_unchecked(atoms, self.support.push_affine(scale, shift))
    }

    /// Same atoms, different declared support.
    pub fn with_support(&self, support: SupportInterval) -> Result<SteppedCdf> {
        Self::new(self.atoms().collect(), support)
    }

    /// `b_{N,0} = sum (t_i - a) c_i`, the area between the CDF and 1 over the support.
    pub fn upper_area(&self) -> f64 {
        self.atoms().map(|(t, c)| (t - self.support.lo()) * c).sum()
    }

    /// `sum (b - t_i) c_i`, the area under the CDF over the support.
    pub fn lower_area(&self) -> f64 {
        self.atoms().map(|(t, c)| (self.support.hi() - t) * c).sum()
    }

    /// `int_{-inf}^x F(s) ds`.
    fn primitive(&self, x: f64) -> f64 {
        let k = self.locs.partition_point(|&t| t <= x);
        if k == 0 {
            0.0
        } else {
            self.cum[k - 1] * x - self.moment[k - 1]
        }
    }
}

impl Cdf for SteppedCdf {
    fn support(&self) -> SupportInterval {
        self.support
    }

    fn eval(&self, t: f64) -> f64 {
        let k = self.locs.partition_point(|&x| x <= t);
        if k == 0 {
            0.0
        } else {
            self.cum[k - 1]
        }
    }

    fn eval_left(&self, t: f64) -> f64 {
        let k = self.locs.partition_point(|&x| x < t);
        if k == 0 {
            0.0
        } else {
            self.cum[k - 1]
        }
    }

    fn generalized_inverse(&self, y: f64) -> Result<f64> {
        check_level_open(y)?;
        let k = self.cum.partition_point(|&c| c <= y);
        Ok(self.locs[k.min(self.locs.len() - 1)])
    }

    fn left_inverse(&self, y: f64) -> Result<f64> {
        check_level_closed(y)?;
        let k = self.cum.partition_point(|&c| c < y);
        Ok(self.locs[k.min(self.locs.len() - 1)])
    }

    fn integral(&self, lo: f64, hi: f64) -> f64 {
        if hi <= lo {
            return 0.0;
        }
        self.primitive(hi) - self.primitive(lo)
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.locs.clone()
    }

    fn saturation_point(&self) -> f64 {
        *self.locs.last().expect("stepped CDF has at least one atom")
    }

    fn as_piecewise(&self) -> Cow<'_, PiecewiseCdf> {
        Cow::Owned(self.to_piecewise())
    }
}

impl SteppedCdf {
    /// Exact conversion to constant segments.
    pub fn to_piecewise(&self) -> PiecewiseCdf {
        let lo = self.support.lo();
        let mut segments = Vec::with_capacity(self.len() + 1);
        if self.locs[0] > lo {
            segments.push(Segment::new(lo, self.locs[0], SegmentKind::Constant { value: 0.0 }));
        }
        for k in 0..self.len() - 1 {
            segments.push(Segment::new(
                self.locs[k],
                self.locs[k + 1],
                SegmentKind::Constant { value: self.cum[k] },
            ));
        }
        PiecewiseCdf::from_parts_unchecked(self.support, segments)
    }
}
