use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use spherica_cli::{run, Cli};

fn main() -> ExitCode {
    let outcome = run(Cli::parse());
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(outcome.stdout.as_bytes());
    let _ = out.flush();
    let _ = std::io::stderr().write_all(outcome.stderr.as_bytes());
    ExitCode::from(outcome.code as u8)
}
