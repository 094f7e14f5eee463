mod args;
mod commands;
mod report;
mod store;

use std::process::ExitCode;

use clap::Parser;

use args::Cli;
use report::Status;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(k) = cli.global.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
        {
            eprintln!("error: cannot start {k} workers: {e}");
            return Status::Error.into();
        }
    }
    match commands::run(&cli.command, &cli.global) {
        Ok(report) => {
            if cli.global.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&report.json).expect("JSON value serializes")
                );
            } else {
                print!("{}", report.text);
            }
            report.status.into()
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            Status::Error.into()
        }
    }
}
