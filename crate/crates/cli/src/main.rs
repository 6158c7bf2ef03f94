use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use poincare_cli::{configure_threads, emit, run, Cli, EXIT_ERROR, EXIT_FAILED, EXIT_OK};

fn main() -> ExitCode {
    // Usage errors exit 1, not clap's default 2, which is reserved for a
    // failed verification.
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::from(EXIT_OK),
                _ => ExitCode::from(EXIT_ERROR),
            };
        }
    };
    let result = configure_threads()
        .and_then(|()| run(&cli.job))
        .and_then(|out| emit(&cli.job, &out).map(|()| out.passed));
    match result {
        Ok(true) => ExitCode::from(EXIT_OK),
        Ok(false) => ExitCode::from(EXIT_FAILED),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
