use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::model::PhysicsModel;
use super::trace::{trace_with, Origin, TraceOptions};
use crate::cdf::{w1_distance, Cdf, PiecewiseCdf};
use crate::error::{Error, Result};
use crate::numeric::{adaptive_simpson, fmt17};

/// Input CDF as a function of position (initial data) or time (boundary data).
pub type CdfMap = Arc<dyn Fn(f64) -> PiecewiseCdf + Send + Sync>;

/// Space, time and state axes of a solution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpaceTimeGrid {
    pub xs: Vec<f64>,
    pub ts: Vec<f64>,
    pub us: Vec<f64>,
}

fn check_axis(name: &str, v: &[f64], nonneg: bool) -> Result<()> {
    if v.is_empty() {
        return Err(Error::Grid(format!("{name} axis is empty")));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::Grid(format!("{name} axis has non-finite values")));
    }
    if v.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Grid(format!("{name} axis is not strictly increasing")));
    }
    if nonneg && v[0] < 0.0 {
        return Err(Error::Grid(format!("{name} axis has negative values")));
    }
    Ok(())
}

impl SpaceTimeGrid {
    pub fn new(xs: Vec<f64>, ts: Vec<f64>, us: Vec<f64>) -> Result<Self> {
        let g = Self { xs, ts, us };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        check_axis("x", &self.xs, true)?;
        check_axis("t", &self.ts, true)?;
        check_axis("U", &self.us, false)
    }

    /// `(t index, x index)` pairs in output order: `t` outer, `x` inner.
    pub fn nodes(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.ts.len()).flat_map(move |it| (0..self.xs.len()).map(move |ix| (it, ix)))
    }
}

/// Values indexed by `(t, x)` nodes, stored with `t` outer.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeField<T> {
    pub xs: Vec<f64>,
    pub ts: Vec<f64>,
    pub nodes: Vec<T>,
}

impl<T> NodeField<T> {
    pub fn get(&self, it: usize, ix: usize) -> &T {
        &self.nodes[it * self.xs.len() + ix]
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64, &T)> {
        let nx = self.xs.len();
        self.nodes
            .iter()
            .enumerate()
            .map(move |(k, v)| (self.xs[k % nx], self.ts[k / nx], v))
    }

    pub fn map<S>(&self, f: impl Fn(&T) -> S) -> NodeField<S> {
        NodeField {
            xs: self.xs.clone(),
            ts: self.ts.clone(),
            nodes: self.nodes.iter().map(f).collect(),
        }
    }
}

/// Scalar `w(x, t)` on the grid.
pub type ScalarField = NodeField<f64>;

impl ScalarField {
    /// CSV with header `x,t,<column>`, `t` outer and `x` inner.
    pub fn to_csv(&self, column: &str) -> String {
        let mut s = format!("x,t,{column}\n");
        for (x, t, w) in self.iter() {
            let _ = writeln!(s, "{},{},{}", fmt17(x), fmt17(t), fmt17(*w));
        }
        s
    }

    pub fn from_csv(text: &str) -> Result<ScalarField> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::Parse("empty CSV".into()))?;
        if header.split(',').count() != 3 || !header.starts_with("x,t,") {
            return Err(Error::Parse(format!("unexpected header {header:?}")));
        }
        let mut rows = Vec::new();
        for line in lines.filter(|l| !l.trim().is_empty()) {
            let v = line
                .split(',')
                .map(|c| c.trim().parse::<f64>().map_err(|e| Error::Parse(format!("{c:?}: {e}"))))
                .collect::<Result<Vec<f64>>>()?;
            if v.len() != 3 {
                return Err(Error::Parse(format!("row {line:?} has {} columns", v.len())));
            }
            rows.push((v[0], v[1], v[2]));
        }
        let mut ts: Vec<f64> = Vec::new();
        let mut xs: Vec<f64> = Vec::new();
        for &(x, t, _) in &rows {
            if ts.last() != Some(&t) {
                ts.push(t);
            }
            if ts.len() == 1 {
                xs.push(x);
            }
        }
        if xs.len() * ts.len() != rows.len() {
            return Err(Error::Parse("CSV rows do not form a full grid".into()));
        }
        Ok(NodeField {
            xs,
            ts,
            nodes: rows.into_iter().map(|r| r.2).collect(),
        })
    }
}

/// State-space CDF at one `(x, t)` node.
#[derive(Clone)]
pub enum CdfSlice {
    /// Pushforward of an input CDF, exact (linear dynamics).
    Exact(PiecewiseCdf),
    /// Evaluated on demand by tracing each state back to its foot.
    Traced(TracedSlice),
}

#[derive(Clone)]
pub struct TracedSlice {
    pub(crate) model: PhysicsModel,
    pub(crate) x: f64,
    pub(crate) t: f64,
    pub(crate) initial: CdfMap,
    pub(crate) boundary: CdfMap,
    pub(crate) opts: TraceOptions,
}

impl std::fmt::Debug for CdfSlice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CdfSlice::Exact(c) => f.debug_tuple("Exact").field(c).finish(),
            CdfSlice::Traced(s) => write!(f, "Traced(x = {}, t = {})", s.x, s.t),
        }
    }
}

impl TracedSlice {
    fn foot_cdf(&self, u: f64) -> Result<(PiecewiseCdf, f64)> {
        let foot = trace_with(&self.model, self.x, u, self.t, &self.opts)?;
        Ok(match foot.origin {
            Origin::Initial { x0, u0 } => ((self.initial)(x0), u0),
            Origin::Boundary { tb, ub } => ((self.boundary)(tb), ub),
        })
    }
}

impl CdfSlice {
    pub fn eval(&self, u: f64) -> Result<f64> {
        match self {
            CdfSlice::Exact(c) => Ok(c.eval(u)),
            CdfSlice::Traced(s) => {
                let (c, u0) = s.foot_cdf(u)?;
                Ok(c.eval(u0))
            }
        }
    }

    pub fn eval_left(&self, u: f64) -> Result<f64> {
        match self {
            CdfSlice::Exact(c) => Ok(c.eval_left(u)),
            CdfSlice::Traced(s) => {
                let (c, u0) = s.foot_cdf(u)?;
                Ok(c.eval_left(u0))
            }
        }
    }

    pub fn as_exact(&self) -> Option<&PiecewiseCdf> {
        match self {
            CdfSlice::Exact(c) => Some(c),
            CdfSlice::Traced(_) => None,
        }
    }
}

/// `W1` between two slices: exact when both are exact, otherwise adaptive
/// quadrature of `|F - G|` over `[lo, hi]`, which must cover both supports.
pub fn slice_distance(a: &CdfSlice, b: &CdfSlice, lo: f64, hi: f64) -> Result<f64> {
    if let (Some(fa), Some(fb)) = (a.as_exact(), b.as_exact()) {
        return Ok(w1_distance(fa, fb));
    }
    let err = std::cell::Cell::new(None);
    let diff = |u: f64| match (a.eval(u), b.eval(u)) {
        (Ok(x), Ok(y)) => (x - y).abs(),
        (Err(e), _) | (_, Err(e)) => {
            err.set(Some(e));
            0.0
        }
    };
    // split so that quadrature does not skip narrow features
    let pieces = 64;
    let h = (hi - lo) / pieces as f64;
    let mut total = 0.0;
    for k in 0..pieces {
        let a0 = lo + h * k as f64;
        total += adaptive_simpson(&diff, a0, a0 + h, 1e-10, 18);
    }
    match err.into_inner() {
        Some(e) => Err(e),
        None => Ok(total),
    }
}

/// CDF solution: per-node slices and their values on the state grid.
#[derive(Debug, Clone)]
pub struct CdfField {
    pub grid: SpaceTimeGrid,
    pub slices: NodeField<CdfSlice>,
    /// `values[(it * nx + ix) * nu + iu] = F(U_iu; x_ix, t_it)`.
    pub values: Vec<f64>,
}

impl CdfField {
    pub fn value(&self, it: usize, ix: usize, iu: usize) -> f64 {
        let (nx, nu) = (self.grid.xs.len(), self.grid.us.len());
        self.values[(it * nx + ix) * nu + iu]
    }

    pub fn slice(&self, it: usize, ix: usize) -> &CdfSlice {
        self.slices.get(it, ix)
    }

    /// CSV with header `x,t,U,F`: `t` outer, `x` middle, `U` inner.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("x,t,U,F\n");
        let g = &self.grid;
        for (it, &t) in g.ts.iter().enumerate() {
            for (ix, &x) in g.xs.iter().enumerate() {
                for (iu, &u) in g.us.iter().enumerate() {
                    let _ = writeln!(
                        s,
                        "{},{},{},{}",
                        fmt17(x),
                        fmt17(t),
                        fmt17(u),
                        fmt17(self.value(it, ix, iu))
                    );
                }
            }
        }
        s
    }
}

/// Pointwise values `e(U; x, t)` on the full grid, same layout as [`CdfField::values`].
#[derive(Debug, Clone, PartialEq)]
pub struct StateField {
    pub grid: SpaceTimeGrid,
    pub values: Vec<f64>,
}

impl StateField {
    pub fn value(&self, it: usize, ix: usize, iu: usize) -> f64 {
        let (nx, nu) = (self.grid.xs.len(), self.grid.us.len());
        self.values[(it * nx + ix) * nu + iu]
    }
}
