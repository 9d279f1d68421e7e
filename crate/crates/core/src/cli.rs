//! The `steerage` command line. [`run`] returns the output and exit code instead of
//! printing, so the binary is a thin wrapper and tests can call it in-process.

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::path::PathBuf;

use crate::error::SteerError;
use crate::geometry::SteeringDirection;
use crate::gmodel::asymmetry_report_with;
use crate::input::{ParseError, StateError, StateSpec};
use crate::quadrature::QuadratureGrid;
use crate::quantity::steering_quantity;
use crate::qubit::CorrelationMatrix;
use crate::report::{analysis_text, analyze, asymmetry_text, mesh_csv, mesh_rows, quantity_line, to_json};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INVALID_STATE: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "steerage", version, about = "Steering ellipsoids and steering quantities of two-qubit states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Grid level k: the 128x256 sphere grid is scaled by 2^k in both directions.
    #[arg(long, global = true, env = "STEERAGE_GRID", allow_negative_numbers = true)]
    pub grid: Option<i32>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Figures, steering quantities and verdicts for both directions.
    Analyze { input: PathBuf },
    /// One-way steering report for a phi_state (or ref_state_29) input.
    Asymmetry { input: PathBuf },
    /// CSV of measurement directions and conditioned states.
    Mesh {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = DirectionArg::A2b)]
        direction: DirectionArg,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Prints `value dimension est_error` for one direction.
    Quantity {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = DirectionArg::A2b)]
        direction: DirectionArg,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DirectionArg {
    A2b,
    B2a,
}

impl From<DirectionArg> for SteeringDirection {
    fn from(d: DirectionArg) -> Self {
        match d {
            DirectionArg::A2b => SteeringDirection::AliceToBob,
            DirectionArg::B2a => SteeringDirection::BobToAlice,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Self {
            stdout,
            stderr: String::new(),
            code: EXIT_OK,
        }
    }

    fn fail(code: i32, stderr: String) -> Self {
        Self {
            stdout: String::new(),
            stderr,
            code,
        }
    }
}

pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli),
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                Output::fail(EXIT_USAGE, text)
            } else {
                Output::ok(text)
            }
        }
    }
}

fn numeric_code(e: &SteerError) -> i32 {
    match e {
        SteerError::InvalidState(_) => EXIT_INVALID_STATE,
        SteerError::Domain(_) | SteerError::Precondition(_) => EXIT_USAGE,
        _ => EXIT_NUMERIC,
    }
}

struct Loaded {
    spec: StateSpec,
    raw: serde_json::Value,
    state: CorrelationMatrix,
}

fn load_spec(path: &PathBuf) -> Result<(StateSpec, serde_json::Value), Output> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s)
            .map_err(|e| Output::fail(EXIT_USAGE, format!("error: cannot read stdin: {e}\n")))?;
        s
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| Output::fail(EXIT_USAGE, format!("error: cannot read {}: {e}\n", path.display())))?
    };
    StateSpec::parse(&text).map_err(|e: ParseError| {
        Output::fail(EXIT_USAGE, format!("error: {}: parse error at {e}\n", path.display()))
    })
}

fn load(path: &PathBuf) -> Result<Loaded, Output> {
    let (spec, raw) = load_spec(path)?;
    let state = spec.to_state().map_err(|e| match e {
        StateError::Invalid { error, validity } => {
            let mut msg = format!("error: {error}\n");
            if let Some(v) = validity {
                msg += &format!(
                    "validity: min eigenvalue {:e}, hermiticity residual {:e}, trace residual {:e}\n",
                    v.min_eigenvalue, v.hermiticity_residual, v.trace_residual
                );
            }
            Output::fail(EXIT_INVALID_STATE, msg)
        }
        StateError::Malformed(m) => Output::fail(EXIT_USAGE, format!("error: {m}\n")),
    })?;
    Ok(Loaded { spec, raw, state })
}

fn grid_of(cli: &Cli) -> Result<QuadratureGrid, Output> {
    QuadratureGrid::at_level(cli.grid.unwrap_or(0)).map_err(|e| Output::fail(EXIT_USAGE, format!("error: {e}\n")))
}

fn render<T: Serialize>(cli: &Cli, report: &T, raw: &[(&str, &serde_json::Value)], text: impl FnOnce() -> String) -> String {
    match cli.format {
        Format::Json => to_json(report, raw),
        Format::Text => text(),
    }
}

pub fn execute(cli: &Cli) -> Output {
    match execute_inner(cli) {
        Ok(out) | Err(out) => out,
    }
}

fn execute_inner(cli: &Cli) -> Result<Output, Output> {
    let fail = |e: SteerError| Output::fail(numeric_code(&e), format!("error: {e}\n"));
    match &cli.command {
        Command::Analyze { input } => {
            let grid = grid_of(cli)?;
            let loaded = load(input)?;
            let asymmetry = match loaded.spec.phi_parameters() {
                Some((p, u)) if p > 0.0 && p <= 0.2 => Some(
                    asymmetry_report_with(p, &u.normalize(), &grid)
                        .map_err(|e| Output::fail(EXIT_NUMERIC, format!("error: {e}\n")))?,
                ),
                _ => None,
            };
            let report = analyze(&loaded.state, &grid, asymmetry)
                .map_err(|e| Output::fail(EXIT_NUMERIC, format!("error: {e}\n")))?;
            Ok(Output::ok(render(cli, &report, &[("state", &loaded.raw)], || {
                analysis_text(&report, &loaded.raw)
            })))
        }
        Command::Asymmetry { input } => {
            let grid = grid_of(cli)?;
            let (spec, _) = load_spec(input)?;
            let Some((p, u)) = spec.phi_parameters() else {
                return Err(Output::fail(
                    EXIT_USAGE,
                    format!("error: asymmetry needs a phi_state or ref_state_29 input, got {}\n", spec.variant()),
                ));
            };
            if !(p > 0.0 && p <= 0.2) {
                return Err(Output::fail(EXIT_USAGE, format!("error: p = {p} outside (0, 1/5]\n")));
            }
            if u.iter().all(|c| *c == 0.0) || u.iter().any(|c| !c.is_finite()) {
                return Err(Output::fail(EXIT_USAGE, "error: u must be a nonzero vector\n".into()));
            }
            let report = asymmetry_report_with(p, &u.normalize(), &grid).map_err(fail)?;
            Ok(Output::ok(render(cli, &report, &[], || asymmetry_text(&report))))
        }
        Command::Mesh {
            input,
            direction,
            samples,
        } => {
            let loaded = load(input)?;
            let rows = mesh_rows(&loaded.state, (*direction).into(), *samples).map_err(fail)?;
            Ok(Output::ok(render(cli, &rows, &[], || mesh_csv(&rows))))
        }
        Command::Quantity { input, direction } => {
            let grid = grid_of(cli)?;
            let loaded = load(input)?;
            let q = steering_quantity(&loaded.state, (*direction).into(), &grid).map_err(fail)?;
            if !q.value.is_finite() || !q.est_error.is_finite() {
                return Err(Output::fail(EXIT_NUMERIC, "error: quantity is not finite\n".into()));
            }
            Ok(Output::ok(render(cli, &q, &[], || quantity_line(&q))))
        }
    }
}
