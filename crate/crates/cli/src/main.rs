//! `codensity`: compute codensity monads of small finite structures, run the
//! verification suites and export diagrams.

mod args;
mod commands;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::Cli;
use commands::Failure;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(output) => {
            // a closed pipe is not an error of the computation
            let _ = std::io::stdout().lock().write_all(output.text.as_bytes());
            ExitCode::from(output.code)
        }
        Err(Failure { message, code }) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}
