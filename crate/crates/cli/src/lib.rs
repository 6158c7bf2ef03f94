//! Front end for the poincare library: parses a job, runs it, and writes a
//! JSON report.
//!
//! Exit status is 0 when the job succeeds and any checked property holds,
//! 2 when a verification fails, and 1 when the computation itself fails.

pub mod args;
pub mod config;
pub mod output;
mod run;

use std::fs;

use anyhow::{Context, Result};

pub use config::{Cli, JobConfig};
pub use run::{run, Outcome, ORDER_RANGE};

pub const EXIT_OK: u8 = 0;
pub const EXIT_ERROR: u8 = 1;
pub const EXIT_FAILED: u8 = 2;

/// Caps the global rayon pool at `POINCARE_THREADS` when it is set.
pub fn configure_threads() -> Result<()> {
    let Ok(v) = std::env::var("POINCARE_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .with_context(|| format!("POINCARE_THREADS must be a positive integer, got {v:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .context("configuring the thread pool")
}

/// Writes the report to the configured output file, or stdout.
pub fn emit(config: &JobConfig, outcome: &Outcome) -> Result<()> {
    let text = output::to_json(&outcome.report)?;
    match config.output() {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
