//! `nlbox`: synthesize, compile, execute and audit non-local box protocols.

mod commands;
mod report;

use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use commands::Cli;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let start = Instant::now();
    let result = commands::run(cli);
    eprintln!("wall_time_ms: {}", start.elapsed().as_millis());
    match result {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err((partial, e)) => {
            print!("{partial}");
            eprintln!("{e}");
            ExitCode::from(e.code())
        }
    }
}
