//! `opinfo`: compression rates, entropy comparisons and property sweeps
//! over classical, quantum and squit systems.
//!
//! Exit codes: 0 success, 1 a checked property was violated, 2 usage or
//! input error, 3 the request needs an unsupported feature.

mod commands;
mod config;
mod output;
mod states;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{ExperimentConfig, Flags};

#[derive(Debug, Parser)]
#[command(name = "opinfo", version, about = "Information content of states in operational theories")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Smallest accepted code lengths and the information-content estimate.
    Rates(Flags),
    /// Randomized property sweeps; exit 1 on any violation.
    Verify(Flags),
    /// Measurement entropy, decomposition entropy and accessible information.
    EntropyCompare(Flags),
    /// The fidelity and operational-distance chain on random pairs.
    FidelityBounds(Flags),
    /// A steering certificate for a state and its finest decomposition.
    SteeringDemo(Flags),
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<opinfo_core::Error>() {
        Some(opinfo_core::Error::Unsupported(_) | opinfo_core::Error::UnsupportedComposition(_)) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, flags, run): (&str, &Flags, fn(&ExperimentConfig) -> anyhow::Result<commands::Outcome>) =
        match &cli.command {
            Command::Rates(f) => ("rates", f, commands::rates),
            Command::Verify(f) => ("verify", f, commands::verify),
            Command::EntropyCompare(f) => ("entropy-compare", f, commands::entropy_compare),
            Command::FidelityBounds(f) => ("fidelity-bounds", f, commands::fidelity_bounds),
            Command::SteeringDemo(f) => ("steering-demo", f, commands::steering_demo),
        };
    let result = ExperimentConfig::resolve(name, flags).and_then(|cfg| {
        let outcome = run(&cfg)?;
        output::emit(&outcome.report)?;
        Ok(outcome.violated)
    });
    match result {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => {
            eprintln!("opinfo {name}: property violated");
            ExitCode::from(1)
        }
        Err(e) => {
            let code = exit_code(&e);
            let kind = if code == 3 { "unsupported" } else { "error" };
            eprintln!("opinfo {name}: {kind}: {e:#}");
            ExitCode::from(code)
        }
    }
}
