use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use stringnet::cli::{run_experiment, Experiment, RunConfig};

#[derive(Parser)]
#[command(name = "stringnet", version, about = "String-net tensor networks and their stochastic automata")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Correlation length along a path on a ring of L sites.
    PathScan(RunConfig),
    /// Monte Carlo estimate of a Pauli string on an open patch.
    Sample(RunConfig),
    /// Two-time correlator of a rule; appends to the output CSV.
    Correlator(RunConfig),
    /// Power-law or exponential fit of a correlator CSV.
    Fit(RunConfig),
    /// Isometry, symmetry, conservation and classification checks.
    Validate(RunConfig),
    /// Compiler, sampler, reduction and parent-Hamiltonian checks against exact contraction.
    OracleCheck(RunConfig),
    /// Run a JSON config file.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
}

fn config(command: Command) -> stringnet::Result<RunConfig> {
    let (exp, mut c) = match command {
        Command::PathScan(c) => (Experiment::PathScan, c),
        Command::Sample(c) => (Experiment::Sample, c),
        Command::Correlator(c) => (Experiment::Correlator, c),
        Command::Fit(c) => (Experiment::Fit, c),
        Command::Validate(c) => (Experiment::Validate, c),
        Command::OracleCheck(c) => (Experiment::OracleCheck, c),
        Command::Run { config } => return RunConfig::load(&config),
    };
    c.experiment = exp;
    Ok(c)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match config(cli.command).and_then(run_experiment) {
        Ok(outcome) => {
            if !outcome.passed {
                eprintln!("stringnet: {} rows written, some checks failed", outcome.rows);
            }
            ExitCode::from(outcome.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("stringnet: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
