//! `ambiflow radius|inputs|propagate|validate --config <file> [--set key=value ...] [--out <dir>]`
//!
//! Exit codes: 0 success, 1 validation violations, 2 configuration error,
//! 3 precondition error. `AMBIFLOW_THREADS` caps the worker count.

mod commands;
pub mod config;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use commands::{cmd_inputs, cmd_propagate, cmd_radius, cmd_validate, CmdError};
pub use config::{apply_override, Axis, ConfigError, GridConfig, Physics, RunConfig, SampleSource};

#[derive(Debug, Parser)]
#[command(name = "ambiflow", version, about = "Wasserstein ambiguity sets propagated along characteristics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct Common {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Override a configuration entry, e.g. `--set radius.beta=0.1`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Output directory (defaults to `out` in the config, then `./out`).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print eps_N and ratios for the configured sample sizes.
    Radius(Common),
    /// Write input balls, bands and the boundary radius series.
    Inputs(Common),
    /// Write propagated radius and band-discrepancy fields.
    Propagate(Common),
    /// Check containment of the true CDF over repeated sample draws.
    Validate(Common),
}

fn thread_cap() -> Result<Option<usize>, CmdError> {
    match std::env::var("AMBIFLOW_THREADS") {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(CmdError::Config(format!("AMBIFLOW_THREADS = {v:?} must be a positive integer"))),
        },
    }
}

fn dispatch(command: &Command, out: &mut dyn Write) -> Result<i32, CmdError> {
    let common = match command {
        Command::Radius(c) | Command::Inputs(c) | Command::Propagate(c) | Command::Validate(c) => c,
    };
    let cfg = RunConfig::load(&common.config, &common.overrides)?;
    let dir = common
        .out
        .clone()
        .or_else(|| cfg.out.clone())
        .unwrap_or_else(|| PathBuf::from("out"));
    match command {
        Command::Radius(_) => cmd_radius(&cfg, out),
        Command::Inputs(_) => cmd_inputs(&cfg, &dir, out),
        Command::Propagate(_) => cmd_propagate(&cfg, &dir, out),
        Command::Validate(_) => cmd_validate(&cfg, &dir, out),
    }
}

/// Runs the command line `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let mut buf = Vec::new();
    let result = thread_cap().and_then(|cap| match cap {
        None => dispatch(&cli.command, &mut buf),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CmdError::Config(format!("cannot start {n} worker threads: {e}")))?
            .install(|| dispatch(&cli.command, &mut buf)),
    });
    let _ = out.write_all(&buf);
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message());
            e.exit_code()
        }
    }
}
