//! `cobarlab`: batch front end over `cobarlab-core`.

mod cache;
mod jobs;
mod markdown;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use cobarlab_core::space::DEFAULT_BUDGET;
use cobarlab_core::Error;

#[derive(Parser, Debug)]
#[command(name = "cobarlab", version, about = "Chains, cobar resolutions and connectivity reports for finite simplicial sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Clone)]
enum Command {
    /// Reduced homology of X and homotopy of its free reduced module.
    Homology(Opts),
    /// Cobar resolution stages and the Tot tower connectivity report.
    Resolve(Opts),
    /// Coface cube of the resolution: partition bound and measured degrees.
    Cube(Opts),
    /// Comparison of the space-level and algebraic stage-n holims.
    Interchange(Opts),
    /// Homotopy spectral sequence of the resolution.
    Ss(Opts),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
pub enum RingArg {
    #[value(name = "Z", alias = "z")]
    Z,
    #[value(name = "F", alias = "f")]
    F,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Markdown,
}

#[derive(Args, Debug, Clone)]
pub struct Opts {
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "F")]
    pub ring: RingArg,
    #[arg(long)]
    pub prime: Option<u64>,
    /// Truncation depth N; for `cube` the cube dimension, for `interchange` the stage n.
    #[arg(long, default_value_t = 1)]
    pub depth: usize,
    #[arg(long, default_value_t = 2)]
    pub window: i64,
    /// Highest simplicial level materialized; defaults to window + 1.
    #[arg(long)]
    pub level_cap: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    /// Highest spectral sequence page.
    #[arg(long, default_value_t = 4)]
    pub r_max: usize,
    #[arg(long)]
    pub cache: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

/// Exit codes shared with CI.
pub const EXIT_OK: u8 = 0;
pub const EXIT_VIOLATION: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Budget { .. } => EXIT_BUDGET,
        Error::Validation(_) | Error::Internal(_) => EXIT_VIOLATION,
        _ => EXIT_INPUT,
    }
}

#[derive(Serialize)]
struct Failure<'a> {
    command: &'a str,
    error: &'a str,
    message: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    violations: Vec<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, opts) = match &cli.command {
        Command::Homology(o) => ("homology", o),
        Command::Resolve(o) => ("resolve", o),
        Command::Cube(o) => ("cube", o),
        Command::Interchange(o) => ("interchange", o),
        Command::Ss(o) => ("ss", o),
    };
    let job = match jobs::JobSpec::from_opts(name, opts) {
        Ok(j) => j,
        Err(e) => return fail(name, &e, vec![]),
    };
    match jobs::run(&job) {
        Ok(out) => {
            let text = match job.format {
                Format::Json => out.json.clone(),
                Format::Markdown => out.markdown.clone(),
            };
            print!("{text}");
            ExitCode::from(if out.violations > 0 { EXIT_VIOLATION } else { EXIT_OK })
        }
        Err(jobs::JobError { error, violations }) => fail(name, &error, violations),
    }
}

fn fail(command: &str, e: &Error, violations: Vec<String>) -> ExitCode {
    let kind = match e {
        Error::Budget { .. } => "budget",
        Error::Validation(_) => "validation",
        Error::Internal(_) => "internal",
        _ => "input",
    };
    let code = if !violations.is_empty() { EXIT_INPUT } else { exit_code(e) };
    eprintln!("cobarlab {command}: {e}");
    for v in &violations {
        eprintln!("  {v}");
    }
    let f = Failure { command, error: kind, message: e.to_string(), violations };
    println!("{}", serde_json::to_string_pretty(&f).expect("serializable"));
    ExitCode::from(code)
}
