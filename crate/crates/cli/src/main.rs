use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let config = scx_cli::RunConfig::parse();
    ExitCode::from(scx_cli::run(&config) as u8)
}
