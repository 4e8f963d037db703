mod args;
mod families;
mod run;

use std::process::ExitCode;

use clap::Parser;

use args::Cli;

/// Everything that can end a run early.
#[derive(Debug)]
pub enum Failure {
    Core(fractalperc::Error),
    Io(String),
    /// A verification suite reported a failed check.
    Check(String),
}

impl From<fractalperc::Error> for Failure {
    fn from(e: fractalperc::Error) -> Self {
        Failure::Core(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run::dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            match e {
                fractalperc::Error::InvalidInput(_) => ExitCode::from(2),
                fractalperc::Error::Capability(_) => ExitCode::from(3),
            }
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("FAIL: {msg}");
            ExitCode::from(1)
        }
    }
}
