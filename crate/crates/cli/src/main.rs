//! `repspace`: runs the toolkit's constructions and audits, writing
//! deterministic JSON reports.
//!
//! Exit codes: 0 verified, 1 refuted with a certificate, 2 inconclusive at
//! the given fuel, 3 usage or parse error.

mod ceer;
mod example;
mod inputs;
mod report;
mod space;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use report::{Report, ReportBuilder};

#[derive(Debug, Parser)]
#[command(name = "repspace", version, about = "Computable topology constructions and audits")]
struct Cli {
    /// Step budget for every partial computation.
    #[arg(long, global = true)]
    fuel: Option<u64>,
    /// Dyadic precision exponent k, meaning a grid of 2^-k.
    #[arg(long, global = true, default_value_t = 16)]
    precision: u32,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Re-check the certificates of a saved report.
    #[arg(long, global = true)]
    verify: Option<PathBuf>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// C.e. equivalence relations and their quotients.
    Ceer {
        #[command(subcommand)]
        cmd: ceer::CeerCmd,
    },
    /// Separation properties of represented spaces.
    Space {
        #[command(subcommand)]
        cmd: space::SpaceCmd,
    },
    /// The separating example spaces and their adversaries.
    Example {
        #[command(subcommand)]
        cmd: example::ExampleCmd,
    },
}

/// Options shared by all commands.
#[derive(Clone, Copy, Debug)]
pub struct Ctx {
    fuel: Option<u64>,
    pub precision: u32,
}

impl Ctx {
    pub fn fuel_or(&self, default: u64) -> u64 {
        self.fuel.unwrap_or(default)
    }

    /// The configuration every report records besides command arguments.
    pub fn config(&self, default_fuel: u64, args: Value) -> Value {
        json!({ "fuel": self.fuel_or(default_fuel), "precision": self.precision, "args": args })
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(repspace::Error),
}

impl From<repspace::Error> for CliError {
    fn from(e: repspace::Error) -> Self {
        CliError::Core(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(s) => f.write_str(s),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// The command line without `--out`, which does not affect the report.
fn echo(args: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    let mut it = args.iter().skip(1);
    while let Some(a) = it.next() {
        if a == "--out" {
            it.next();
        } else if !a.starts_with("--out=") {
            out.push(a.clone());
        }
    }
    out
}

fn run(cli: &Cli) -> CliResult<ReportBuilder> {
    let ctx = Ctx { fuel: cli.fuel, precision: cli.precision };
    if let Some(path) = &cli.verify {
        return verify::verify(&ctx, path);
    }
    match &cli.command {
        Some(Command::Ceer { cmd }) => ceer::run(&ctx, cmd),
        Some(Command::Space { cmd }) => space::run(&ctx, cmd),
        Some(Command::Example { cmd }) => example::run(&ctx, cmd),
        None => Err(CliError::Usage("expected a subcommand or --verify; see --help".into())),
    }
}

fn emit(report: &Report, out: Option<&PathBuf>) -> std::io::Result<()> {
    let mut text = serde_json::to_string_pretty(report).expect("reports serialize");
    text.push('\n');
    match out {
        Some(path) => {
            std::fs::write(path, text)?;
            println!("{:?}: {} ({})", report.outcome, report.kind, path.display());
            Ok(())
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let args: Vec<String> = std::env::args().collect();
    match run(&cli) {
        Ok(builder) => {
            let report = builder.finish(echo(&args));
            if let Err(e) = emit(&report, cli.out.as_ref()) {
                eprintln!("error: cannot write report: {e}");
                return ExitCode::from(3);
            }
            ExitCode::from(report.outcome.exit_code() as u8)
        }
        Err(CliError::Core(e @ repspace::Error::FuelExhausted { .. })) => {
            eprintln!("inconclusive: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn echo_drops_out_path() {
        let args: Vec<String> =
            ["repspace", "ceer", "--out", "x.json", "closure", "--out=y"].map(String::from).to_vec();
        assert_eq!(echo(&args), vec!["ceer", "closure"]);
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
