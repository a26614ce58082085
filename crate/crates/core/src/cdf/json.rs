use std::borrow::Cow;

use serde::{Deserialize, Serialize};

use super::{Cdf, PiecewiseCdf, Segment, SegmentKind, SteppedCdf, SupportInterval};
use crate::error::{Error, Result};
use crate::numeric::fmt17;

/// Either representation, used where a CDF crosses a file boundary.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyCdf {
    Stepped(SteppedCdf),
    Piecewise(PiecewiseCdf),
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum CdfRecord {
    Stepped {
        support: SupportInterval,
        atoms: Vec<[f64; 2]>,
    },
    Piecewise {
        support: SupportInterval,
        segments: Vec<SegmentRecord>,
    },
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum SegmentRecord {
    Constant {
        start: String,
        end: String,
        value: String,
    },
    Linear {
        start: String,
        end: String,
        y_start: String,
        y_end: String,
    },
    Hyperbolic {
        start: String,
        end: String,
        base: String,
        amplitude: String,
        pole: String,
    },
    Quadratic {
        start: String,
        end: String,
        c0: String,
        c1: String,
        c2: String,
    },
}

fn num(s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|e| Error::Parse(format!("bad number {s:?}: {e}")))
}

impl From<&Segment> for SegmentRecord {
    fn from(g: &Segment) -> Self {
        let (start, end) = (fmt17(g.start), fmt17(g.end));
        match g.kind {
            SegmentKind::Constant { value } => SegmentRecord::Constant {
                start,
                end,
                value: fmt17(value),
            },
            SegmentKind::Linear { y_start, y_end } => SegmentRecord::Linear {
                start,
                end,
                y_start: fmt17(y_start),
                y_end: fmt17(y_end),
            },
            SegmentKind::Hyperbolic {
                base,
                amplitude,
                pole,
            } => SegmentRecord::Hyperbolic {
                start,
                end,
                base: fmt17(base),
                amplitude: fmt17(amplitude),
                pole: fmt17(pole),
            },
            SegmentKind::Quadratic { c0, c1, c2 } => SegmentRecord::Quadratic {
                start,
                end,
                c0: fmt17(c0),
                c1: fmt17(c1),
                c2: fmt17(c2),
            },
        }
    }
}

impl SegmentRecord {
    fn to_segment(&self) -> Result<Segment> {
        Ok(match self {
            SegmentRecord::Constant { start, end, value } => {
                Segment::new(num(start)?, num(end)?, SegmentKind::Constant { value: num(value)? })
            }
            SegmentRecord::Linear {
                start,
                end,
                y_start,
                y_end,
            } => Segment::new(
                num(start)?,
                num(end)?,
                SegmentKind::Linear {
                    y_start: num(y_start)?,
                    y_end: num(y_end)?,
                },
            ),
            SegmentRecord::Hyperbolic {
                start,
                end,
                base,
                amplitude,
                pole,
            } => Segment::new(
                num(start)?,
                num(end)?,
                SegmentKind::Hyperbolic {
                    base: num(base)?,
                    amplitude: num(amplitude)?,
                    pole: num(pole)?,
                },
            ),
            SegmentRecord::Quadratic {
                start,
                end,
                c0,
                c1,
                c2,
            } => Segment::new(
                num(start)?,
                num(end)?,
                SegmentKind::Quadratic {
                    c0: num(c0)?,
                    c1: num(c1)?,
                    c2: num(c2)?,
                },
            ),
        })
    }
}

impl AnyCdf {
    pub fn to_json_value(&self) -> serde_json::Value {
        let record = match self {
            AnyCdf::Stepped(f) => CdfRecord::Stepped {
                support: f.support(),
                atoms: f.atoms().map(|(t, c)| [t, c]).collect(),
            },
            AnyCdf::Piecewise(f) => CdfRecord::Piecewise {
                support: f.support(),
                segments: f.segments().iter().map(SegmentRecord::from).collect(),
            },
        };
        serde_json::to_value(record).expect("CDF records always serialize")
    }

    pub fn to_json(&self) -> String {
        self.to_json_value().to_string()
    }

    pub fn from_json_value(v: serde_json::Value) -> Result<Self> {
        let record: CdfRecord =
            serde_json::from_value(v).map_err(|e| Error::Parse(e.to_string()))?;
        match record {
            CdfRecord::Stepped { support, atoms } => Ok(AnyCdf::Stepped(SteppedCdf::new(
                atoms.into_iter().map(|[t, c]| (t, c)).collect(),
                support,
            )?)),
            CdfRecord::Piecewise { support, segments } => {
                let segments = segments
                    .iter()
                    .map(SegmentRecord::to_segment)
                    .collect::<Result<Vec<_>>>()?;
                Ok(AnyCdf::Piecewise(PiecewiseCdf::new(support, segments)?))
            }
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let v: serde_json::Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json_value(v)
    }

    fn inner(&self) -> &dyn Cdf {
        match self {
            AnyCdf::Stepped(f) => f,
            AnyCdf::Piecewise(f) => f,
        }
    }
}

impl From<SteppedCdf> for AnyCdf {
    fn from(f: SteppedCdf) -> Self {
        AnyCdf::Stepped(f)
    }
}

impl From<PiecewiseCdf> for AnyCdf {
    fn from(f: PiecewiseCdf) -> Self {
        AnyCdf::Piecewise(f)
    }
}

impl Cdf for AnyCdf {
    fn support(&self) -> SupportInterval {
        self.inner().support()
    }
    fn eval(&self, t: f64) -> f64 {
        self.inner().eval(t)
    }
    fn eval_left(&self, t: f64) -> f64 {
        self.inner().eval_left(t)
    }
    fn generalized_inverse(&self, y: f64) -> Result<f64> {
        self.inner().generalized_inverse(y)
    }
    fn left_inverse(&self, y: f64) -> Result<f64> {
        self.inner().left_inverse(y)
    }
    fn integral(&self, lo: f64, hi: f64) -> f64 {
        self.inner().integral(lo, hi)
    }
    fn breakpoints(&self) -> Vec<f64> {
        self.inner().breakpoints()
    }
    fn saturation_point(&self) -> f64 {
        self.inner().saturation_point()
    }
    fn as_piecewise(&self) -> Cow<'_, PiecewiseCdf> {
        match self {
            AnyCdf::Stepped(f) => Cow::Owned(f.to_piecewise()),
            AnyCdf::Piecewise(f) => Cow::Borrowed(f),
        }
    }
}
