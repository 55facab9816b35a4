//! `embguard` command line.

mod args;
mod job;
mod manifest;
mod sweep;

use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use embguard_core::{Error, ErrorCategory};

use args::{Cli, Command};
use manifest::{digests, mismatches, RunManifest};

/// Environment variable capping the worker count; 0 or unset means automatic.
const THREADS_ENV: &str = "EMBGUARD_THREADS";

const EXIT_CONFIG: u8 = 2;
const EXIT_IO: u8 = 3;
const EXIT_TRIGGERS: u8 = 4;
const EXIT_IDS: u8 = 5;
const EXIT_REPLAY_MISMATCH: u8 = 1;

fn exit_code(e: &Error) -> u8 {
    match e.category() {
        ErrorCategory::Config => EXIT_CONFIG,
        ErrorCategory::Io => EXIT_IO,
        ErrorCategory::Triggers => EXIT_TRIGGERS,
        ErrorCategory::Ids => EXIT_IDS,
    }
}

fn init_threads() -> Result<(), Error> {
    let n = match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::config(THREADS_ENV, format!("{v:?} is not a non-negative integer")))?,
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::config(THREADS_ENV, e.to_string()))
}

fn run(cli: Cli) -> Result<u8, Error> {
    init_threads()?;
    if let Command::Replay(a) = cli.command {
        return replay(&a.manifest);
    }
    let (job, manifest_path) = job::resolve(cli.command)?;
    let start = Instant::now();
    let outcome = job.run()?;
    let manifest = RunManifest::new(&job, &outcome, start.elapsed().as_secs_f64())?;
    manifest.write(&manifest_path)?;
    Ok(outcome.exit_code as u8)
}

fn replay(path: &std::path::Path) -> Result<u8, Error> {
    let recorded = RunManifest::read(path)?;
    let outcome = recorded.config.run()?;
    let current = digests(&outcome.outputs)?;
    let bad = mismatches(&recorded.outputs, &current);
    if bad.is_empty() {
        println!("replay: {} outputs identical", recorded.outputs.len());
        return Ok(0);
    }
    for (p, now) in &bad {
        println!("replay: {} differs (now {})", p.display(), now.as_deref().unwrap_or("missing"));
    }
    Ok(EXIT_REPLAY_MISMATCH)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("embguard: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
