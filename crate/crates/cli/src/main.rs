mod args;
mod commands;
mod config;
mod exit;

use std::process::ExitCode;

use clap::Parser;

use crate::args::{Cli, Command};

fn main() -> ExitCode {
    let raw = match config::expand(std::env::args_os().collect()) {
        Ok(a) => a,
        Err(e) => return exit::report(&e),
    };
    let cli = Cli::parse_from(raw);

    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global() {
            log::warn!("could not size the thread pool: {e}");
        }
    }

    let result = match &cli.command {
        Command::Sample(a) => commands::sample(a),
        Command::Solve(a) => commands::solve(a),
        Command::Evaluate(a) => commands::evaluate(a),
        Command::Vss(a) => commands::vss(a),
        Command::Sweep(a) => commands::sweep(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => exit::report(&e),
    }
}
