mod commands;
mod config;

use std::process::ExitCode;

use clap::Parser;
use gfmatroid::Error;

use commands::Failure;
use config::{Cli, FileConfig, RunConfig};

const USAGE: u8 = 1;
const VIOLATION: u8 = 2;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let file = match &cli.config {
        Some(p) => FileConfig::load(p),
        None => Ok(FileConfig::default()),
    };
    let outcome = file
        .and_then(|f| RunConfig::merge(&cli, f))
        .map_err(Failure::Usage)
        .and_then(|cfg| commands::run(&cli.command, &cfg));
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Core(Error::Violation { lemma, detail })) => {
            eprintln!("error: {lemma} violated");
            let report = serde_json::json!({ "violation": lemma, "instance": detail });
            println!(
                "{}",
                serde_json::to_string_pretty(&report).unwrap_or_default()
            );
            ExitCode::from(VIOLATION)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(USAGE)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(USAGE)
        }
    }
}
