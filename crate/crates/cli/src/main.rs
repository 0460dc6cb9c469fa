//! `qprop`: evaluate formulas, check laws, draw lattices and generate models.

mod check;
mod eval;
mod gen;
mod input;
mod lattice;
mod parse;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

#[derive(Parser, Debug)]
#[command(name = "qprop", version, about = "Physical propositions over classical and quantum models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a formula in every state of a model.
    Eval(eval::EvalArgs),
    /// Run every applicable law and invariant check on a model.
    Check(check::CheckArgs),
    /// Emit the Hasse diagram of the subspace lattice or proposition poset.
    Lattice(lattice::LatticeArgs),
    /// Generate a seeded random model or quantum spec.
    Gen(gen::GenArgs),
    /// Parse a formula and print its canonical form and language.
    Parse(parse::ParseArgs),
}

/// Where the model comes from.
#[derive(Args, Debug, Clone)]
pub struct Source {
    /// Classical model file (JSON).
    #[arg(long, value_name = "PATH", conflicts_with = "qm_spec")]
    pub model: Option<PathBuf>,
    /// Hilbert-space spec file (JSON).
    #[arg(long = "qm-spec", value_name = "PATH")]
    pub qm_spec: Option<PathBuf>,
    /// Closure cap overriding the one in the spec file.
    #[arg(long, value_name = "N")]
    pub cap: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] qprop_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(qprop_core::Error::ClosureOverflow { .. }) => 2,
            _ => 1,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Rendered command output and whether it reports violations.
pub struct Output {
    pub body: String,
    pub violations: bool,
}

impl Output {
    pub fn clean(body: String) -> Self {
        Output {
            body,
            violations: false,
        }
    }
}

/// Rejects formats a command cannot produce.
pub fn require_format(format: Format, allowed: &[Format]) -> CliResult<()> {
    if allowed.contains(&format) {
        Ok(())
    } else {
        Err(CliError::Usage(format!(
            "format {} is not available for this command",
            format.to_possible_value().expect("no skipped variants").get_name()
        )))
    }
}

pub fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn run(cli: Cli) -> CliResult<Output> {
    match cli.command {
        Command::Eval(args) => eval::run(&args),
        Command::Check(args) => check::run(&args),
        Command::Lattice(args) => lattice::run(&args),
        Command::Gen(args) => gen::run(&args),
        Command::Parse(args) => parse::run(&args),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{}", out.body);
            if out.violations {
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
