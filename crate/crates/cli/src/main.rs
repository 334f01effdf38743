//! `rig-poisson`: threshold analysis, simulation, exact oracles and sampling
//! for induced subgraph counts in random intersection graphs.

mod args;
mod commands;
mod config;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::{CliError, Outcome};

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(CliError::input("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::internal(format!("thread pool: {e}")))?;
    }
    match &cli.command {
        Command::Analyze(a) => commands::analyze(cli, a),
        Command::Simulate(a) => commands::simulate(cli, a),
        Command::Oracle(a) => commands::oracle(cli, a),
        Command::Sample(a) => commands::sample(cli, a),
    }
}

fn emit(cli: &Cli, body: &str) -> std::io::Result<()> {
    match &cli.output {
        Some(path) => std::fs::write(path, body),
        None => std::io::stdout().lock().write_all(body.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            if let Err(e) = emit(&cli, &outcome.body) {
                eprintln!("error: writing output: {e}");
                return ExitCode::from(commands::EXIT_INPUT);
            }
            for w in &outcome.notes {
                eprintln!("note: {w}");
            }
            match outcome.assertion_failure {
                Some(msg) => {
                    eprintln!("assertion failed: {msg}");
                    ExitCode::from(commands::EXIT_ASSERTION)
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
