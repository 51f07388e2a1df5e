//! `qtanner`: command-line driver for the planted quantum Tanner pipeline.
//!
//! Every subcommand prints JSON (or the text format named in its help) to
//! stdout. Exit codes: 0 success, 2 violated precondition, 3 exhausted
//! enumeration budget, 1 anything else.

mod cmd_code;
mod cmd_csp;
mod cmd_expander;
mod cmd_inner;
mod cmd_nlts;
mod cmd_pipeline;
mod io;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use planted_qtanner::Error;

#[derive(Parser)]
#[command(name = "qtanner", version, about = "Planted quantum Tanner codes, CSP emission and toy NLTS checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Cayley expanders on congruence subgroups of SL2(Z/p^{m+1}).
    #[command(subcommand)]
    Expander(cmd_expander::ExpanderCmd),
    /// Planted inner code pairs.
    #[command(subcommand)]
    Inner(cmd_inner::InnerCmd),
    /// Quantum Tanner codes: build and verify.
    #[command(subcommand)]
    Code(cmd_code::CodeCmd),
    /// Exhaustive cluster, spread and depth checks on toy codes.
    #[command(subcommand)]
    Nlts(cmd_nlts::NltsCmd),
    /// Linear CSP instances from codes.
    #[command(subcommand)]
    Csp(cmd_csp::CspCmd),
    /// Runs the staged pipeline from a JSON config, with flag overrides.
    Pipeline(cmd_pipeline::PipelineArgs),
    /// Human-readable summary of a pipeline output directory.
    Report(cmd_pipeline::ReportArgs),
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Expander(c) => cmd_expander::run(c),
        Command::Inner(c) => cmd_inner::run(c),
        Command::Code(c) => cmd_code::run(c),
        Command::Nlts(c) => cmd_nlts::run(c),
        Command::Csp(c) => cmd_csp::run(c),
        Command::Pipeline(a) => cmd_pipeline::run(a),
        Command::Report(a) => cmd_pipeline::report(a),
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(e) if e.is_budget() => 3,
        Some(e) if e.is_precondition() => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
