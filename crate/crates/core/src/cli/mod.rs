//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 for usage, I/O and parse errors, 2 when the
//! instance or schedule is infeasible or the requested method does not apply
//! to the deadline regime.

pub mod files;
pub mod render;

use std::ffi::OsString;
use std::fmt::Display;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::error::Error;
use crate::feasibility::{classify, RegimeKind};
use crate::model::{sample_curve, validate_schedule, AoiCurve, Instance, Schedule, DEFAULT_TOL};
use crate::solver::{
    closed_form_schedule, general_solve, greedy_solve, nowait_solve, oracle_solve, solve,
    SolveResult,
};

use files::{read_instance, read_schedule, write_schedule, write_text, ScheduleFile};
use render::{curve_csv, curve_svg, format_number, DEFAULT_HEIGHT, DEFAULT_WIDTH};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;

pub const DEFAULT_GRID_STEP: f64 = 0.01;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Infeasible(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Infeasible(_) => EXIT_INFEASIBLE,
            _ => EXIT_USAGE,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InfeasibleSchedule { .. }
            | Error::InfeasibleDeadline { .. }
            | Error::NoWaitInfeasible { .. }
            | Error::ReducedInfeasible { .. }
            | Error::BelowClosedForm { .. } => CliError::Infeasible(e.to_string()),
            Error::InvalidGridStep(_) => CliError::Usage(e.to_string()),
            Error::InvalidInstance(_)
            | Error::Dimension { .. }
            | Error::InconsistentReduced { .. } => CliError::Parse(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "mec-aoi",
    version,
    about = "Minimum-age transmission and computing schedules under a deadline"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Auto,
    Greedy,
    ClosedForm,
    Nowait,
    General,
    Oracle,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the deadline thresholds and regime of an instance.
    Check {
        /// Instance JSON file.
        instance: PathBuf,
    },
    /// Compute a schedule and report its age metrics.
    Solve {
        /// Instance JSON file.
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        method: MethodArg,
        /// Lattice spacing in seconds for the oracle method.
        #[arg(long, default_value_t = DEFAULT_GRID_STEP)]
        grid_step: f64,
        /// Write the schedule JSON here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export the age curve of a schedule as `time,age` CSV.
    Curve {
        instance: PathBuf,
        schedule: PathBuf,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Plot the age curve of a schedule as SVG.
    Plot {
        instance: PathBuf,
        schedule: PathBuf,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_WIDTH)]
        width: u32,
        #[arg(long, default_value_t = DEFAULT_HEIGHT)]
        height: u32,
    },
}

/// Runs the command line given in `args` (program name first) and returns
/// the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    match command {
        Command::Check { instance } => cmd_check(&instance, out, err),
        Command::Solve {
            instance,
            method,
            grid_step,
            out: path,
        } => cmd_solve(&instance, method, grid_step, path.as_deref(), out, err),
        Command::Curve {
            instance,
            schedule,
            out: path,
        } => cmd_curve(&instance, &schedule, path.as_deref(), out, err),
        Command::Plot {
            instance,
            schedule,
            out: path,
            width,
            height,
        } => cmd_plot(
            &instance,
            &schedule,
            path.as_deref(),
            width,
            height,
            out,
            err,
        ),
    }
}

fn load_instance(path: &Path, err: &mut dyn Write) -> Result<Instance, CliError> {
    let (instance, unknown) = read_instance(path)?;
    if !unknown.is_empty() {
        let _ = writeln!(
            err,
            "warning: {}: ignoring unknown key(s): {}",
            path.display(),
            unknown.join(", ")
        );
    }
    Ok(instance)
}

fn line(out: &mut dyn Write, key: &str, value: impl Display) -> Result<(), CliError> {
    writeln!(out, "{key}: {value}").map_err(|e| CliError::Io(e.to_string()))
}

fn join(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| format_number(*v))
        .collect::<Vec<_>>()
        .join(" ")
}

fn cmd_check(path: &Path, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let instance = load_instance(path, err)?;
    let regime = classify(&instance);
    let th = regime.thresholds;
    line(out, "packets", instance.n())?;
    line(out, "deadline", format_number(instance.deadline()))?;
    line(out, "min_deadline", format_number(th.min_deadline))?;
    line(out, "nowait_threshold", format_number(th.nowait))?;
    line(out, "closedform_threshold", format_number(th.closed_form))?;
    line(out, "regime", regime.kind)?;
    Ok(if regime.kind == RegimeKind::Infeasible {
        EXIT_INFEASIBLE
    } else {
        EXIT_OK
    })
}

fn run_method(
    instance: &Instance,
    method: MethodArg,
    grid_step: f64,
) -> Result<SolveResult, Error> {
    match method {
        MethodArg::Auto => solve(instance),
        MethodArg::Greedy => greedy_solve(instance),
        MethodArg::ClosedForm => closed_form_schedule(instance),
        MethodArg::Nowait => nowait_solve(instance),
        MethodArg::General => general_solve(instance),
        MethodArg::Oracle => oracle_solve(instance, grid_step),
    }
}

fn cmd_solve(
    path: &Path,
    method: MethodArg,
    grid_step: f64,
    out_path: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, CliError> {
    let instance = load_instance(path, err)?;
    let result = run_method(&instance, method, grid_step)?;
    if let Some(p) = out_path {
        write_schedule(p, &ScheduleFile::from(&result))?;
    }
    line(out, "method", result.method)?;
    line(out, "regime", result.regime.kind)?;
    line(out, "area", format_number(result.metrics.area))?;
    line(out, "average", format_number(result.metrics.average))?;
    line(out, "peaks", join(&result.metrics.peaks))?;
    line(out, "final_age", format_number(result.metrics.final_age))?;
    if let Some(level) = result.water_level {
        line(out, "water_level", format_number(level))?;
    }
    line(out, "gen_times", join(&result.schedule.gen_times))?;
    line(out, "comp_starts", join(&result.schedule.comp_starts))?;
    Ok(EXIT_OK)
}

fn load_curve(
    instance_path: &Path,
    schedule_path: &Path,
    err: &mut dyn Write,
) -> Result<(Instance, Schedule, AoiCurve), CliError> {
    let instance = load_instance(instance_path, err)?;
    let schedule = read_schedule(schedule_path)?.schedule();
    let violations = validate_schedule(&instance, &schedule, DEFAULT_TOL)?;
    if !violations.is_empty() {
        return Err(Error::InfeasibleSchedule { violations }.into());
    }
    let curve = sample_curve(&instance, &schedule)?;
    Ok((instance, schedule, curve))
}

fn emit(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => write_text(p, text),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(e.to_string())),
    }
}

fn cmd_curve(
    instance_path: &Path,
    schedule_path: &Path,
    out_path: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, CliError> {
    let (_, _, curve) = load_curve(instance_path, schedule_path, err)?;
    emit(out_path, &curve_csv(&curve), out)?;
    Ok(EXIT_OK)
}

fn cmd_plot(
    instance_path: &Path,
    schedule_path: &Path,
    out_path: Option<&Path>,
    width: u32,
    height: u32,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, CliError> {
    if width == 0 || height == 0 {
        return Err(CliError::Usage("width and height must be positive".into()));
    }
    let (instance, schedule, curve) = load_curve(instance_path, schedule_path, err)?;
    emit(
        out_path,
        &curve_svg(&instance, &schedule, &curve, width, height),
        out,
    )?;
    Ok(EXIT_OK)
}
