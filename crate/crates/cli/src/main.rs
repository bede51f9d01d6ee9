use std::process::ExitCode;

use clap::Parser;

mod args;
mod commands;
mod config_file;
mod error;
mod output;
mod params;

use args::{Cli, Command};
use error::CliError;

fn main() -> ExitCode {
    let argv = match config_file::expand_args(std::env::args_os().collect()) {
        Ok(argv) => argv,
        Err(e) => return report(e),
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Analytic(a) => commands::analytic::run(&a),
        Command::Sweep(a) => commands::sweep::run(&a),
        Command::Simulate(a) => commands::simulate::run(&a),
        Command::Verify(a) => commands::verify::run(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => report(e),
    }
}

fn report(e: CliError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(e.exit_code())
}
