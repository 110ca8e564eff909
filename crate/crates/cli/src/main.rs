use std::process::ExitCode;

use clap::Parser;
use spikeonet_cli::{classify, error_json, run, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = anyhow::Error::new(e);
            eprintln!("{}", error_json(&err));
            return ExitCode::from(2);
        }
    };
    match run(&cli) {
        Ok(report) => {
            println!(
                "{} finished: {} artifacts in report.json",
                report.experiment,
                report.artifacts.len()
            );
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("{}", error_json(&err));
            ExitCode::from(classify(&err).exit_code() as u8)
        }
    }
}
