use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = privchan_cli::Cli::parse();
    match privchan_cli::run(cli) {
        Ok(report) => {
            let mut out = io::stdout().lock();
            match writeln!(out, "{report}").and_then(|()| out.flush()) {
                Ok(()) => ExitCode::SUCCESS,
                // a closed pipe (e.g. piping into `head`) is not a failure
                Err(e) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: cannot write report: {e}");
                    ExitCode::FAILURE
                }
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    }
}
