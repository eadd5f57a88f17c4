//! `quadfourier`: lemma verification suites, decompositions and counting experiments.

mod count;
mod decompose;
mod output;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(version, about, long_about = None)]
struct Cli {
    #[command(flatten)]
    common: Common,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Common {
    /// Prime modulus
    #[arg(long, global = true, default_value_t = 3)]
    pub p: u32,

    /// Dimension of the ambient space
    #[arg(long, global = true, default_value_t = 2)]
    pub n: usize,

    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Enumeration cap; each command has its own default
    #[arg(long, global = true)]
    pub cap: Option<u128>,

    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    #[serde(skip)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run lemma suites
    Verify(verify::VerifyArgs),
    /// Decompose a function read from a JSON table
    Decompose(decompose::DecomposeArgs),
    /// Count solutions of a linear system inside a set
    Count(count::CountArgs),
    /// Deviation from the random count against U^2 uniformity
    ExperimentImpbound(count::ImpboundArgs),
}

/// How a command finished, mapped onto the process exit code.
pub enum Outcome {
    Pass,
    Fail,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Verify(a) => verify::run(&cli.common, a),
        Command::Decompose(a) => decompose::run(&cli.common, a),
        Command::Count(a) => count::run(&cli.common, a),
        Command::ExperimentImpbound(a) => count::run_impbound(&cli.common, a),
    };
    match result {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
