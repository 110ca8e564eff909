//! Experiment configuration: JSON file, command-line overrides, defaults.

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use spikeonet::encoding::{FloatPrecision, GridEncoder};
use spikeonet::membrane::LifConfig;

use crate::errors::ConfigError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    NaiveRegression,
    MlpMembrane,
    DeeponetRegression,
    MnistClassification,
    EncodeInspect,
    LifTrace,
    CompareEncodings,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::NaiveRegression => "naive-regression",
            Experiment::MlpMembrane => "mlp-membrane",
            Experiment::DeeponetRegression => "deeponet-regression",
            Experiment::MnistClassification => "mnist-classification",
            Experiment::EncodeInspect => "encode-inspect",
            Experiment::LifTrace => "lif-trace",
            Experiment::CompareEncodings => "compare-encodings",
        }
    }
}

/// Every key is optional in the file. After [`ExperimentConfig::resolve`]
/// every key relevant to the experiment is filled in.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub experiment: Option<Experiment>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// rate, latency, identity, lower-triangular, floating-point or direct.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub encoder: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_t: Option<usize>,
    /// Multiplies `n_t` (the "10x time steps" variant uses 10).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oversample: Option<usize>,
    /// 32 or 64.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub float_precision: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lif: Option<LifConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub branch_widths: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trunk_widths: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub head_widths: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epochs: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lr: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub batch_size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub loss: Option<spikeonet::deeponet::DeepOnetLoss>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_x: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub length_scale: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_train: Option<usize>,
    /// `[window, order]`; `[0, 0]` disables smoothing.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub smoothing: Option<[usize; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub noise_sigma: Option<f64>,
    /// step, square, sin-ode.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub functions: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sin_k: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mnist_dir: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub train_size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub test_size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub emulator_path: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub emulator_images: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub emulator_epochs: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    /// Points per axis of the Ricker grid.
    pub ricker_points: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_reps: Option<usize>,
    /// Constant input current for `lif-trace`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub current: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub encoder: Option<String>,
    pub out: Option<PathBuf>,
}

fn or<T>(slot: &mut Option<T>, value: T) {
    if slot.is_none() {
        *slot = Some(value);
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(text).map_err(|e| ConfigError(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Applies overrides, then experiment defaults, and validates.
    pub fn resolve(mut self, experiment: Experiment, overrides: &Overrides) -> Result<Self, ConfigError> {
        if let Some(declared) = self.experiment {
            if declared != experiment {
                return Err(ConfigError(format!(
                    "config is for {} but {} was requested",
                    declared.name(),
                    experiment.name()
                )));
            }
        }
        self.experiment = Some(experiment);
        if overrides.seed.is_some() {
            self.seed = overrides.seed;
        }
        if overrides.encoder.is_some() {
            self.encoder.clone_from(&overrides.encoder);
        }
        if overrides.out.is_some() {
            self.out.clone_from(&overrides.out);
        }
        or(&mut self.seed, 0);
        or(&mut self.oversample, 1);
        or(&mut self.float_precision, 32);
        match experiment {
            Experiment::NaiveRegression => {
                or(&mut self.encoder, "latency".into());
                or(&mut self.n_t, 50);
                or(&mut self.n_x, 100);
                or(&mut self.epochs, 3000);
                or(&mut self.lr, 2e-3);
                or(&mut self.noise_sigma, 0.1);
                or(
                    &mut self.functions,
                    vec!["step".into(), "square".into(), "sin-ode".into()],
                );
                or(&mut self.sin_k, std::f64::consts::PI);
            }
            Experiment::DeeponetRegression | Experiment::CompareEncodings => {
                or(&mut self.encoder, "lower-triangular".into());
                or(&mut self.n_t, 50);
                or(&mut self.n_x, 100);
                or(&mut self.samples, 1000);
                or(&mut self.n_train, 800);
                or(&mut self.length_scale, 1.0);
                or(&mut self.branch_widths, vec![30, 30]);
                or(&mut self.trunk_widths, vec![30, 30]);
                or(&mut self.epochs, 500);
                or(&mut self.lr, 1e-3);
                or(&mut self.batch_size, 32);
                or(&mut self.loss, spikeonet::deeponet::DeepOnetLoss::Mse);
                or(&mut self.smoothing, [51, 3]);
            }
            Experiment::MnistClassification => {
                or(&mut self.encoder, "rate".into());
                or(&mut self.n_t, 25);
                or(&mut self.branch_widths, vec![512, 250, 50]);
                or(&mut self.trunk_widths, vec![50, 50]);
                or(&mut self.epochs, 15);
                or(&mut self.lr, 1e-3);
                or(&mut self.batch_size, 64);
                or(&mut self.loss, spikeonet::deeponet::DeepOnetLoss::Mse);
                or(&mut self.train_size, 10_000);
                or(&mut self.test_size, 2_000);
            }
            Experiment::MlpMembrane => {
                or(&mut self.encoder, "lower-triangular".into());
                or(&mut self.n_t, 20);
                // A unit spike alone stays below this threshold, so the
                // membrane integrates instead of copying its input.
                or(
                    &mut self.lif,
                    LifConfig {
                        v_thresh: 1.5,
                        ..LifConfig::default()
                    },
                );
                or(&mut self.head_widths, vec![100, 1]);
                or(&mut self.epochs, 30);
                or(&mut self.lr, 1e-3);
                or(&mut self.batch_size, 32);
                or(&mut self.emulator_images, 300);
                or(&mut self.emulator_epochs, 120);
                or(&mut self.ricker_points, 100);
                or(&mut self.timing_reps, 5);
            }
            Experiment::EncodeInspect => {
                or(&mut self.encoder, "lower-triangular".into());
                or(&mut self.n_x, 5);
                or(&mut self.n_t, 5);
            }
            Experiment::LifTrace => {
                or(&mut self.n_t, 20);
                or(&mut self.current, 0.2);
            }
        }
        or(&mut self.lif, LifConfig::default());
        let out = PathBuf::from("runs").join(format!("{}-seed{}", experiment.name(), self.seed.unwrap_or(0)));
        or(&mut self.out, out);
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<(), ConfigError> {
        if let Some(name) = &self.encoder {
            self.grid_encoder_named(name, 0)?;
        }
        if self.n_t == Some(0) || self.oversample == Some(0) {
            return Err(ConfigError("n_t and oversample must be positive".into()));
        }
        if let Some(lr) = self.lr {
            if !(lr > 0.0 && lr.is_finite()) {
                return Err(ConfigError(format!("lr must be positive, got {lr}")));
            }
        }
        if let (Some(total), Some(train)) = (self.samples, self.n_train) {
            if train == 0 || train >= total {
                return Err(ConfigError(format!(
                    "n_train must be in 1..{total}, got {train}"
                )));
            }
        }
        if let Some(lif) = &self.lif {
            lif.validate().map_err(|e| ConfigError(format!("lif: {e}")))?;
        }
        Ok(())
    }

    /// The configured encoder with its effective step count.
    pub fn grid_encoder(&self) -> Result<(GridEncoder, usize), ConfigError> {
        let name = self
            .encoder
            .as_deref()
            .ok_or_else(|| ConfigError("no encoder configured".into()))?;
        let enc = self.grid_encoder_named(name, self.seed.unwrap_or(0))?;
        let n_t = self.n_t.unwrap_or(50) * self.oversample.unwrap_or(1);
        Ok((enc, n_t))
    }

    fn grid_encoder_named(&self, name: &str, seed: u64) -> Result<GridEncoder, ConfigError> {
        Ok(match name {
            "rate" => GridEncoder::Rate { seed },
            "latency" => GridEncoder::Latency,
            "identity" => GridEncoder::Identity,
            "lower-triangular" => GridEncoder::LowerTriangular,
            "floating-point" => GridEncoder::FloatingPoint {
                precision: FloatPrecision::from_bits(self.float_precision.unwrap_or(32))
                    .map_err(|e| ConfigError(e.to_string()))?,
            },
            "direct" => GridEncoder::Direct,
            other => return Err(ConfigError(format!("unknown encoder {other:?}"))),
        })
    }

    pub fn out_dir(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from("runs"))
    }
}
