//! `nambu`: verify, glue, contract, lift and integrate structures described
//! by JSON job files.
//!
//! Exit codes: 0 when every check passes, 1 on a mathematical failure (the
//! report carries the witness), 2 on input, schema or IO errors and on
//! blow-up of a flow.

mod commands;
mod job;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{CommandError, Outcome};
use job::{InputError, JobFile, Overrides};

#[derive(Debug, Parser)]
#[command(name = "nambu", version, about = "Poisson, Jacobi and Nambu structure toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the command's artifact here: the report for verify, a structure
    /// or atlas file for glue, cascade and lift, the trajectory CSV for flow.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed of the sampling protocol.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Residual tolerance of sampled identities.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Sample points per box.
    #[arg(long, global = true)]
    samples: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the defining identities of a structure, or validate an atlas.
    Verify { file: PathBuf },
    /// Glue a locally conformal atlas into a global Jacobi-type pair.
    Glue { file: PathBuf },
    /// Integrate a Hamiltonian flow and run its diagnostics.
    Flow { file: PathBuf },
    /// Fix trailing bracket entries of a Nambu structure.
    Cascade { file: PathBuf },
    /// Lift a ternary Nambu pair to a generalized Jacobi pair of order four.
    Lift { file: PathBuf },
}

fn run(cli: &Cli) -> Result<Outcome, CommandError> {
    let o = Overrides { seed: cli.seed, tol: cli.tol, samples: cli.samples };
    let (file, cmd): (&PathBuf, fn(&JobFile, Overrides) -> Result<Outcome, CommandError>) = match &cli.command {
        Command::Verify { file } => (file, commands::verify),
        Command::Glue { file } => (file, commands::glue),
        Command::Flow { file } => (file, commands::flow),
        Command::Cascade { file } => (file, commands::cascade),
        Command::Lift { file } => (file, commands::lift),
    };
    cmd(&JobFile::load(file)?, o)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    print!("{}", outcome.report);
    if let (Some(path), Some(content)) = (&cli.out, &outcome.artifact) {
        if let Err(source) = std::fs::write(path, content) {
            eprintln!("error: {}", InputError::Write { path: path.display().to_string(), source });
            return ExitCode::from(2);
        }
    }
    if outcome.passed {
        ExitCode::SUCCESS
    } else {
        eprintln!("failed: {}", outcome.failed.join(", "));
        ExitCode::from(1)
    }
}
