use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use smallq::cli::{Cli, CliError, run};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(text) => {
            let _ = std::io::stdout().write_all(text.as_bytes());
            ExitCode::SUCCESS
        }
        Err(CliError::Check(text)) => {
            let _ = std::io::stdout().write_all(text.as_bytes());
            ExitCode::from(1)
        }
        Err(err) => {
            eprintln!("error: {}", err.message());
            ExitCode::from(err.code())
        }
    }
}
