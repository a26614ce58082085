use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::ambiguity::RadiusSpec;
use crate::numeric::linspace;
use crate::propagation::{CornerPrecedence, PhysicsModel, ScalarFn, SpaceTimeGrid};
use crate::scenario::{draw_parameters, seeded_rng, Params, Seeding};

/// Either an explicit list of values or `{start, stop, count}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Axis {
    Values(Vec<f64>),
    Range { start: f64, stop: f64, count: usize },
}

impl Axis {
    pub fn values(&self) -> Vec<f64> {
        match self {
            Axis::Values(v) => v.clone(),
            Axis::Range { start, stop, count } => linspace(*start, *stop, *count),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub x: Axis,
    pub t: Axis,
    pub u: Axis,
}

/// Flux derivative and source tabulated on increasing states, interpolated linearly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tabulated {
    pub u: Vec<f64>,
    pub qdot: Vec<f64>,
    pub r: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Physics {
    #[serde(rename = "theta_r")]
    Linear(f64),
    Tabulated(Tabulated),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SampleSource {
    Synthetic { seed: u64, n: usize },
    /// JSON array of parameter triples in `[0, 1]^3`.
    File(PathBuf),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PropagateMode {
    Ball,
    Band,
    #[default]
    Both,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PropagateOptions {
    #[serde(default)]
    pub mode: PropagateMode,
    /// Locations of the `w(t)` profiles.
    #[serde(default = "default_cross_sections")]
    pub cross_sections: Vec<f64>,
}

impl Default for PropagateOptions {
    fn default() -> Self {
        Self {
            mode: PropagateMode::default(),
            cross_sections: default_cross_sections(),
        }
    }
}

fn default_cross_sections() -> Vec<f64> {
    vec![0.2, 1.0]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputsOptions {
    /// Boundary times for the radius series.
    #[serde(default = "default_series")]
    pub times: Axis,
    /// Boundary times at which full balls and bands are written.
    #[serde(default = "default_snapshots")]
    pub snapshots: Vec<f64>,
}

impl Default for InputsOptions {
    fn default() -> Self {
        Self {
            times: default_series(),
            snapshots: default_snapshots(),
        }
    }
}

fn default_series() -> Axis {
    Axis::Range {
        start: 0.0,
        stop: 2.0,
        count: 201,
    }
}

fn default_snapshots() -> Vec<f64> {
    vec![0.0, 0.25, 0.5, 0.75]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValidateOptions {
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub seeding: Seeding,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        Self {
            trials: default_trials(),
            seeding: Seeding::default(),
        }
    }
}

fn default_trials() -> usize {
    20
}

/// One JSON document driving every command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub physics: Physics,
    pub radius: RadiusSpec,
    pub samples: SampleSource,
    pub grid: GridConfig,
    /// Sample sizes listed by `radius`.
    #[serde(default)]
    pub n_list: Vec<usize>,
    #[serde(default)]
    pub corner: CornerPrecedence,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub inputs: InputsOptions,
    #[serde(default)]
    pub propagate: PropagateOptions,
    #[serde(default)]
    pub validate: ValidateOptions,
}

/// Errors of configuration loading, reported with exit code 2.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

fn cfg_err(msg: impl Into<String>) -> ConfigError {
    ConfigError(msg.into())
}

/// Parses an override value as JSON, falling back to a plain string.
fn parse_value(raw: &str) -> Value {
    serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()))
}

/// Applies `key.sub=value`, creating intermediate objects as needed.
pub fn apply_override(doc: &mut Value, assignment: &str) -> Result<(), ConfigError> {
    let (key, raw) = assignment
        .split_once('=')
        .ok_or_else(|| cfg_err(format!("override {assignment:?} is not key=value")))?;
    let parts: Vec<&str> = key.split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(cfg_err(format!("override key {key:?} is malformed")));
    }
    let mut node = doc;
    for part in &parts[..parts.len() - 1] {
        let obj = node
            .as_object_mut()
            .ok_or_else(|| cfg_err(format!("override {key:?} descends into a non-object")))?;
        node = obj.entry(part.to_string()).or_insert_with(|| Value::Object(Default::default()));
    }
    let obj = node
        .as_object_mut()
        .ok_or_else(|| cfg_err(format!("override {key:?} descends into a non-object")))?;
    obj.insert(parts[parts.len() - 1].to_string(), parse_value(raw));
    Ok(())
}

impl RunConfig {
    pub fn load(path: &Path, overrides: &[String]) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| cfg_err(format!("cannot read {}: {e}", path.display())))?;
        let mut doc: Value =
            serde_json::from_str(&text).map_err(|e| cfg_err(format!("{}: invalid JSON: {e}", path.display())))?;
        for o in overrides {
            apply_override(&mut doc, o)?;
        }
        let mut cfg: RunConfig = serde_json::from_value(doc).map_err(|e| cfg_err(format!("invalid config: {e}")))?;
        // relative sample paths resolve against the config file
        if let SampleSource::File(p) = &mut cfg.samples {
            if p.is_relative() {
                if let Some(dir) = path.parent() {
                    *p = dir.join(&*p);
                }
            }
        }
        cfg.check()?;
        Ok(cfg)
    }

    pub fn check(&self) -> Result<(), ConfigError> {
        self.radius.validate().map_err(|e| cfg_err(e.to_string()))?;
        self.space_time_grid()?;
        if let Physics::Tabulated(t) = &self.physics {
            if t.u.len() < 2 || t.qdot.len() != t.u.len() || t.r.len() != t.u.len() {
                return Err(cfg_err("tabulated physics needs matching u, qdot, r of length >= 2"));
            }
            if t.u.windows(2).any(|w| !(w[1] > w[0])) {
                return Err(cfg_err("tabulated physics: u must be strictly increasing"));
            }
        }
        if let SampleSource::Synthetic { n: 0, .. } = self.samples {
            return Err(cfg_err("samples.synthetic.n must be at least 1"));
        }
        if self.n_list.contains(&0) {
            return Err(cfg_err("n_list entries must be at least 1"));
        }
        Ok(())
    }

    pub fn space_time_grid(&self) -> Result<SpaceTimeGrid, ConfigError> {
        SpaceTimeGrid::new(self.grid.x.values(), self.grid.t.values(), self.grid.u.values())
            .map_err(|e| cfg_err(e.to_string()))
    }

    pub fn model(&self) -> PhysicsModel {
        match &self.physics {
            Physics::Linear(theta) => PhysicsModel::linear(*theta),
            Physics::Tabulated(t) => {
                let (qdot, r, rdot) = tabulated_fns(t);
                PhysicsModel::nonlinear(qdot, r, rdot)
            }
        }
    }

    /// Source coefficient of the linear model, if any.
    pub fn theta_r(&self) -> Option<f64> {
        match self.physics {
            Physics::Linear(t) => Some(t),
            Physics::Tabulated(_) => None,
        }
    }

    pub fn seed(&self) -> u64 {
        match self.samples {
            SampleSource::Synthetic { seed, .. } => seed,
            SampleSource::File(_) => 0,
        }
    }

    pub fn sample_count(&self) -> Result<usize, ConfigError> {
        match &self.samples {
            SampleSource::Synthetic { n, .. } => Ok(*n),
            SampleSource::File(_) => Ok(self.load_samples()?.len()),
        }
    }

    pub fn load_samples(&self) -> Result<Vec<Params>, ConfigError> {
        match &self.samples {
            SampleSource::Synthetic { seed, n } => Ok(draw_parameters(&mut seeded_rng(*seed, 0), *n)),
            SampleSource::File(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| cfg_err(format!("cannot read samples {}: {e}", p.display())))?;
                let v: Vec<Params> = serde_json::from_str(&text)
                    .map_err(|e| cfg_err(format!("samples {}: expected an array of [a1, a2, a3]: {e}", p.display())))?;
                if v.is_empty() {
                    return Err(cfg_err(format!("samples {} is empty", p.display())));
                }
                if v.iter().flatten().any(|a| !(0.0..=1.0).contains(a)) {
                    return Err(cfg_err(format!("samples {} leave the unit cube", p.display())));
                }
                Ok(v)
            }
        }
    }
}

fn tabulated_fns(t: &Tabulated) -> (ScalarFn, ScalarFn, ScalarFn) {
    let us = Arc::new(t.u.clone());
    let locate = move |us: &[f64], u: f64| -> (usize, f64) {
        let k = us.partition_point(|&v| v <= u).clamp(1, us.len() - 1) - 1;
        let w = ((u - us[k]) / (us[k + 1] - us[k])).clamp(0.0, 1.0);
        (k, w)
    };
    let interp = |ys: Vec<f64>| -> ScalarFn {
        let us = us.clone();
        Arc::new(move |u| {
            let (k, w) = locate(&us, u);
            ys[k] + w * (ys[k + 1] - ys[k])
        })
    };
    let rdot: ScalarFn = {
        let us = us.clone();
        let r = t.r.clone();
        Arc::new(move |u| {
            if u < us[0] || u > us[us.len() - 1] {
                return 0.0;
            }
            let (k, _) = locate(&us, u);
            (r[k + 1] - r[k]) / (us[k + 1] - us[k])
        })
    };
    (interp(t.qdot.clone()), interp(t.r.clone()), rdot)
}
