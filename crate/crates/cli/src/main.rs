mod args;
mod run;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use crate::args::{Cli, Command};
use crate::run::{execute, EXIT_IO, EXIT_MISMATCH, EXIT_USAGE};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let outcome = match execute(&cli) {
        Ok(outcome) => outcome,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let out = match &cli.command {
        Command::Spectrum(c) => &c.out,
        Command::Verify(v) => &v.common.out,
        Command::Dump(d) => &d.common.out,
    };
    let written = match out {
        Some(path) => std::fs::write(path, &outcome.text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(outcome.text.as_bytes()).and_then(|_| stdout.flush())
        }
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(EXIT_IO as u8);
    }
    if outcome.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_MISMATCH as u8)
    }
}
