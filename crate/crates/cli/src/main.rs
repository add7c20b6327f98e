use std::process::ExitCode;

use clap::Parser;
use snake_cli::Cli;

fn main() -> ExitCode {
    ExitCode::from(snake_cli::run(&Cli::parse()))
}
