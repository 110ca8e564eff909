//! Experiment driver: `spikeonet <experiment> [--config PATH] [--seed N]
//! [--encoder NAME] [--out DIR]`.

pub mod config;
pub mod errors;
pub mod experiments;
pub mod output;

use std::path::PathBuf;

use clap::Parser;

pub use config::{Experiment, ExperimentConfig, Overrides};
pub use errors::{classify, error_json, ConfigError, DataError, ErrorKind};
pub use output::{Artifact, RunDir, RunReport};

#[derive(Debug, Parser)]
#[command(name = "spikeonet", version, about = "Spiking DeepONet experiments")]
pub struct Cli {
    pub experiment: Experiment,
    /// JSON config; unknown keys are rejected.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub encoder: Option<String>,
    /// Output directory (default runs/<experiment>-seed<N>).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl Cli {
    pub fn resolve(&self) -> Result<ExperimentConfig, ConfigError> {
        let base = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        base.resolve(
            self.experiment,
            &Overrides {
                seed: self.seed,
                encoder: self.encoder.clone(),
                out: self.out.clone(),
            },
        )
    }
}

/// Resolves the config and runs the experiment.
pub fn run(cli: &Cli) -> anyhow::Result<RunReport> {
    let cfg = cli.resolve()?;
    experiments::run_resolved(&cfg)
}
