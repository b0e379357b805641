mod job;
mod report;

use std::process::ExitCode;

use clap::Parser;

use job::{Cli, JobSpec, Usage};
use sagbi_core::Error;

/// Failure of a command: bad input (exit 2) or a computation that did not
/// go through (exit 1).
pub enum Failure {
    Usage(String),
    Compute(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::Parse { .. }
            | Error::InvalidRing(_)
            | Error::InvalidOrder(_)
            | Error::OutOfRange(_)
            | Error::LengthMismatch { .. }
            | Error::Inhomogeneous { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Compute(e.to_string()),
        }
    }
}

impl From<Usage> for Failure {
    fn from(u: Usage) -> Failure {
        Failure::Usage(u.0)
    }
}

fn run(cli: Cli) -> Result<String, Failure> {
    let job = JobSpec::from_cli(cli)?;
    if let Some(n) = job.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| Failure::Usage(e.to_string()))?;
    }
    report::dispatch(&job)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(msg)) => {
            eprintln!("failure: {msg}");
            ExitCode::from(1)
        }
    }
}
