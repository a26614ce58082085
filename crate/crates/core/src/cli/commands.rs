use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;
use std::sync::Arc;

use serde_json::json;

use super::config::{ConfigError, PropagateMode, RunConfig};
use crate::ambiguity::{ambiguity_radius, AmbiguityBall};
use crate::cdf::{w1_distance, AnyCdf};
use crate::error::Error;
use crate::numeric::fmt17;
use crate::propagation::{
    band_discrepancy, propagate_band, solve_w1_pde, ScalarField, SpaceTimeGrid, TraceOptions,
};
use crate::scenario::{
    example_model, l0, lb, solution_support, validate_containment, ExampleConfig, ScenarioInputs, Seeding,
};

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
pub enum CmdError {
    Config(String),
    Precondition(String),
}

impl CmdError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CmdError::Config(_) => 2,
            CmdError::Precondition(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CmdError::Config(m) | CmdError::Precondition(m) => m,
        }
    }
}

impl From<ConfigError> for CmdError {
    fn from(e: ConfigError) -> Self {
        CmdError::Config(e.0)
    }
}

impl From<Error> for CmdError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidConstants(_) | Error::Parse(_) | Error::Grid(_) => CmdError::Config(e.to_string()),
            _ => CmdError::Precondition(e.to_string()),
        }
    }
}

fn io_err(path: &Path, e: std::io::Error) -> CmdError {
    CmdError::Config(format!("cannot write {}: {e}", path.display()))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CmdError> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    }
    std::fs::write(path, contents).map_err(|e| io_err(path, e))
}

fn write_json(path: &Path, v: &serde_json::Value) -> Result<(), CmdError> {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    write_file(path, &s)
}

/// `eps_N` for the configured sample size and the example's parameter box.
fn eps(cfg: &RunConfig, n: usize) -> Result<f64, CmdError> {
    Ok(ambiguity_radius(&cfg.radius, n, example_model(0.0).pm.rho_a)?)
}

fn scenario_inputs(cfg: &RunConfig) -> Result<Arc<ScenarioInputs>, CmdError> {
    let params = cfg.load_samples()?;
    let e = eps(cfg, params.len())?;
    Ok(Arc::new(ScenarioInputs::new(params, e, Seeding::Nominal)?))
}

fn ball_json(ball: &AmbiguityBall) -> serde_json::Value {
    json!({
        "radius": ball.radius,
        "support": [ball.support.lo(), ball.support.hi()],
        "center": AnyCdf::from(ball.center.clone()).to_json_value(),
    })
}

/// `N,epsilon,ratio_vs_first` for every configured sample size.
pub fn cmd_radius(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32, CmdError> {
    let ns = if cfg.n_list.is_empty() {
        vec![cfg.sample_count()?]
    } else {
        cfg.n_list.clone()
    };
    let eps_list = ns.iter().map(|&n| eps(cfg, n)).collect::<Result<Vec<_>, _>>()?;
    let mut s = String::from("N,epsilon,ratio_vs_first\n");
    for (n, e) in ns.iter().zip(&eps_list) {
        let _ = writeln!(s, "{n},{},{}", fmt17(*e), fmt17(eps_list[0] / e));
    }
    out.write_all(s.as_bytes()).map_err(|e| CmdError::Config(e.to_string()))?;
    Ok(0)
}

/// Input balls and bands, plus the boundary radius series.
pub fn cmd_inputs(cfg: &RunConfig, dir: &Path, out: &mut dyn Write) -> Result<i32, CmdError> {
    let inputs = scenario_inputs(cfg)?;
    let ball0 = inputs.ball0();
    write_json(
        &dir.join("inputs_initial.json"),
        &json!({
            "eps": inputs.eps,
            "lipschitz": l0(),
            "ball": ball_json(&ball0),
            "band": inputs.band0().to_json_value(),
        }),
    )?;

    let snapshots: Vec<serde_json::Value> = cfg
        .inputs
        .snapshots
        .iter()
        .map(|&t| {
            json!({
                "t": t,
                "lipschitz": lb(t),
                "ball": ball_json(&inputs.ball_b(t)),
                "band": inputs.band_b(t).to_json_value(),
            })
        })
        .collect();
    write_json(&dir.join("inputs_boundary.json"), &serde_json::Value::Array(snapshots))?;

    let mut csv = String::from("t,rho_b,rho_b_env,rho_b_max\n");
    for t in cfg.inputs.times.values() {
        let band = inputs.band_b(t);
        let _ = writeln!(
            csv,
            "{},{},{},{}",
            fmt17(t),
            fmt17(inputs.nominal_b(t)),
            fmt17(w1_distance(&band.lower, &band.upper)),
            fmt17(band.support.width())
        );
    }
    write_file(&dir.join("rho_b.csv"), &csv)?;
    let _ = writeln!(
        out,
        "eps_N = {}, rho_0 = {}; wrote inputs_initial.json, inputs_boundary.json, rho_b.csv to {}",
        fmt17(inputs.eps),
        fmt17(ball0.radius),
        dir.display()
    );
    Ok(0)
}

/// Ball radius field, band discrepancy field and cross-sections.
pub fn cmd_propagate(cfg: &RunConfig, dir: &Path, out: &mut dyn Write) -> Result<i32, CmdError> {
    let mode = cfg.propagate.mode;
    let want_ball = mode != PropagateMode::Band;
    let want_band = mode != PropagateMode::Ball;
    let model = cfg.model();
    if want_ball && !model.is_linear() {
        return Err(Error::LinearityRequired.into());
    }
    let inputs = scenario_inputs(cfg)?;
    let grid = cfg.space_time_grid()?;
    let opts = TraceOptions {
        corner: cfg.corner,
        ..TraceOptions::default()
    };
    let (rho0, e) = (inputs.nominal0(), inputs.eps);
    let (u_lo, u_hi) = (grid.us[0], grid.us[grid.us.len() - 1]);

    let ball_field = |g: &SpaceTimeGrid| -> Result<ScalarField, CmdError> {
        Ok(solve_w1_pde(&model, &|_| rho0, &|t| lb(t) * e, g, &opts)?)
    };
    let band_field = |g: &SpaceTimeGrid| -> Result<ScalarField, CmdError> {
        let (b0, bb) = inputs.band_maps();
        let bands = propagate_band(&model, &b0, &bb, g, &opts)?;
        Ok(band_discrepancy(&bands, u_lo, u_hi)?)
    };

    let mut written = Vec::new();
    if want_ball {
        write_file(&dir.join("w_ball.csv"), &ball_field(&grid)?.to_csv("w"))?;
        written.push("w_ball.csv");
    }
    if want_band {
        write_file(&dir.join("w_env.csv"), &band_field(&grid)?.to_csv("w_env"))?;
        written.push("w_env.csv");
    }

    if !cfg.propagate.cross_sections.is_empty() {
        let mut xs = cfg.propagate.cross_sections.clone();
        xs.sort_by(f64::total_cmp);
        xs.dedup();
        let cut = SpaceTimeGrid::new(xs, grid.ts.clone(), grid.us.clone())?;
        let w = if want_ball { Some(ball_field(&cut)?) } else { None };
        let w_env = if want_band { Some(band_field(&cut)?) } else { None };
        let theta = model.theta_r();
        let mut header = vec!["x", "t"];
        header.extend(w.as_ref().map(|_| "w"));
        header.extend(w_env.as_ref().map(|_| "w_env"));
        header.extend(theta.map(|_| "w_max"));
        let mut csv = header.join(",") + "\n";
        // x outer so that each profile is contiguous
        for (ix, &x) in cut.xs.iter().enumerate() {
            for (it, &t) in cut.ts.iter().enumerate() {
                let mut row = vec![fmt17(x), fmt17(t)];
                row.extend(w.as_ref().map(|f| fmt17(*f.get(it, ix))));
                row.extend(w_env.as_ref().map(|f| fmt17(*f.get(it, ix))));
                row.extend(theta.map(|th| fmt17(solution_support(x, t, th).width())));
                csv += &row.join(",");
                csv.push('\n');
            }
        }
        write_file(&dir.join("cross_sections.csv"), &csv)?;
        written.push("cross_sections.csv");
    }
    let _ = writeln!(out, "wrote {} to {}", written.join(", "), dir.display());
    Ok(0)
}

/// Monte Carlo containment check; exit 1 when any node fails.
pub fn cmd_validate(cfg: &RunConfig, dir: &Path, out: &mut dyn Write) -> Result<i32, CmdError> {
    let trials = cfg.validate.trials;
    if trials == 0 {
        return Err(CmdError::Config("invalid trials: validate.trials must be at least 1".into()));
    }
    let theta_r = cfg.theta_r().ok_or(Error::LinearityRequired)?;
    let grid = cfg.space_time_grid()?;
    let ex = ExampleConfig {
        theta_r,
        n_samples: cfg.sample_count()?,
        radius: cfg.radius,
        seed: cfg.seed(),
        seeding: cfg.validate.seeding,
    };
    let report = validate_containment(&ex, trials, &grid.xs, &grid.ts)?;
    write_json(
        &dir.join("validation.json"),
        &serde_json::to_value(&report).expect("report serializes"),
    )?;
    let _ = writeln!(
        out,
        "trials = {}, nodes = {}, containment = {}, violations = {}, mechanism violations = {}",
        report.trials,
        report.nodes,
        fmt17(report.containment_fraction),
        report.violation_count,
        report.mechanism_violations
    );
    Ok(if report.passed() { 0 } else { 1 })
}
