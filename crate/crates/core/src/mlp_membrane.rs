//! A dense network trained to imitate a LIF layer's spike-in/spike-out map.
//!
//! The emulator sees one neuron's whole input train (`N_t` steps) and emits
//! that neuron's output train. A population is handled column by column, so
//! one trained emulator fits any layer width with the same `N_t`.

use std::path::Path;

use ndarray::{s, Array2, ArrayView2, Axis};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::data::{ricker_grid, MnistRecord, RICKER_SIGMA};
use crate::encoding::{lower_triangle_encode_coarse, rate_encode, SpikeTrain};
use crate::error::{Error, Result};
use crate::membrane::{lif_euler_run, lif_integral_run, LifConfig, MembraneModel};
use crate::metrics::{time_per_sample, EvalReport};
use crate::nn::{fit_mse, Activation, Checkpoint, DenseNet, FitConfig};

pub const HIDDEN_WIDTHS: [usize; 4] = [100, 100, 100, 100];
pub const CHECKPOINT_ROLE: &str = "mlp-membrane";
/// Output threshold on the `{0, 1}`-scaled regression output.
pub const SPIKE_THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LifSource {
    Euler,
    Integral,
}

/// Rows pair one neuron's input train with its LIF output train.
#[derive(Debug, Clone, PartialEq)]
pub struct MembraneDataset {
    pub inputs: Array2<f64>,
    pub targets: Array2<f64>,
}

impl MembraneDataset {
    pub fn len(&self) -> usize {
        self.inputs.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.inputs.nrows() == 0
    }

    pub fn n_t(&self) -> usize {
        self.inputs.ncols()
    }

    /// Fraction of target bits that are spikes.
    pub fn target_spike_fraction(&self) -> f64 {
        self.targets.mean().unwrap_or(0.0)
    }

    /// Keeps rows with at least one input spike plus the first `keep_blank`
    /// silent rows.
    pub fn filter_active(&self, keep_blank: usize) -> Self {
        let mut blanks = 0;
        let keep: Vec<usize> = (0..self.len())
            .filter(|&r| {
                if self.inputs.row(r).iter().any(|&v| v != 0.0) {
                    true
                } else {
                    blanks += 1;
                    blanks <= keep_blank
                }
            })
            .collect();
        Self {
            inputs: self.inputs.select(Axis(0), &keep),
            targets: self.targets.select(Axis(0), &keep),
        }
    }

    /// First `n` rows and the rest.
    pub fn split_at(&self, n: usize) -> (Self, Self) {
        let n = n.min(self.len());
        (
            Self {
                inputs: self.inputs.slice(s![..n, ..]).to_owned(),
                targets: self.targets.slice(s![..n, ..]).to_owned(),
            },
            Self {
                inputs: self.inputs.slice(s![n.., ..]).to_owned(),
                targets: self.targets.slice(s![n.., ..]).to_owned(),
            },
        )
    }
}

/// Runs the chosen LIF solver on every train and collects per-neuron rows.
pub fn generate_membrane_dataset(
    source: LifSource,
    spike_inputs: &[SpikeTrain],
    cfg: &LifConfig,
) -> Result<MembraneDataset> {
    let first = spike_inputs.first().ok_or(Error::EmptyDataset)?;
    let n_t = first.n_t();
    let rows: usize = spike_inputs.iter().map(SpikeTrain::neurons).sum();
    let mut inputs = Array2::zeros((rows, n_t));
    let mut targets = Array2::zeros((rows, n_t));
    let mut r = 0;
    for train in spike_inputs {
        if train.n_t() != n_t {
            return Err(Error::dim(format!(
                "spike trains mix {n_t} and {} time steps",
                train.n_t()
            )));
        }
        let current = train.to_f64();
        let trace = match source {
            LifSource::Euler => lif_euler_run(cfg, current.view())?,
            LifSource::Integral => lif_integral_run(cfg, current.view())?,
        };
        let out = trace.spikes.to_f64();
        let k = train.neurons();
        inputs
            .slice_mut(s![r..r + k, ..])
            .assign(&current.t());
        targets.slice_mut(s![r..r + k, ..]).assign(&out.t());
        r += k;
    }
    Ok(MembraneDataset { inputs, targets })
}

/// Frozen MLP membrane: four ReLU layers of 100 and a Heaviside output.
#[derive(Debug, Clone, PartialEq)]
pub struct MembraneEmulator {
    net: DenseNet,
}

impl MembraneEmulator {
    pub fn from_net(net: DenseNet) -> Result<Self> {
        let layers = net.layers();
        let widths: Vec<usize> = layers.iter().map(|l| l.output_dim()).collect();
        if layers.len() != 5
            || widths[..4] != HIDDEN_WIDTHS
            || widths[4] != net.input_dim()
            || layers[..4].iter().any(|l| l.activation != Activation::Relu)
            || layers[4].activation != Activation::Heaviside
        {
            return Err(Error::arg(
                "emulator needs ReLU layers [100, 100, 100, 100] and a Heaviside output of the input width",
            ));
        }
        Ok(Self { net })
    }

    pub fn net(&self) -> &DenseNet {
        &self.net
    }

    pub fn n_t(&self) -> usize {
        self.net.input_dim()
    }

    /// Binary output rows for `batch × N_t` input rows.
    pub fn emulate_rows(&self, rows: ArrayView2<'_, f64>) -> Result<Array2<f64>> {
        self.net.predict_batch(rows)
    }

    pub fn emulate(&self, spikes_in: &SpikeTrain) -> Result<SpikeTrain> {
        let out = self.respond(spikes_in.to_f64().view())?;
        SpikeTrain::from_binary_f64(out.view(), spikes_in.dt())
    }

    pub fn to_checkpoint(&self) -> Checkpoint {
        Checkpoint::from_net(&self.net, Some(CHECKPOINT_ROLE))
    }

    pub fn from_checkpoint(ckpt: &Checkpoint) -> Result<Self> {
        if ckpt.role.as_deref() != Some(CHECKPOINT_ROLE) {
            return Err(Error::Format(format!(
                "checkpoint role {:?} is not {CHECKPOINT_ROLE:?}",
                ckpt.role
            )));
        }
        Self::from_net(ckpt.to_net()?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        self.to_checkpoint().save(path)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_checkpoint(&Checkpoint::load(path)?)
    }
}

impl MembraneModel for MembraneEmulator {
    fn name(&self) -> &str {
        "mlp-membrane"
    }

    fn respond(&self, current: ArrayView2<'_, f64>) -> Result<Array2<f64>> {
        if current.nrows() != self.n_t() {
            return Err(Error::dim(format!(
                "emulator window is {} steps, input has {}",
                self.n_t(),
                current.nrows()
            )));
        }
        let out = self.emulate_rows(current.t())?;
        Ok(out.reversed_axes().as_standard_layout().to_owned())
    }
}

/// Trains the regression network on `{0, 1}` targets with an identity output,
/// then folds the 0.5 threshold into the last bias and switches the output to
/// Heaviside. Returns the emulator and the per-epoch training loss.
pub fn train_emulator(dataset: &MembraneDataset, fit: &FitConfig) -> Result<(MembraneEmulator, Vec<f64>)> {
    if dataset.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let n_t = dataset.n_t();
    let mut rng = ChaCha8Rng::seed_from_u64(fit.seed);
    let mut shape: Vec<(usize, Activation)> =
        HIDDEN_WIDTHS.iter().map(|&w| (w, Activation::Relu)).collect();
    shape.push((n_t, Activation::Identity));
    let mut net = DenseNet::glorot(n_t, &shape, &mut rng)?;
    let history = fit_mse(&mut net, dataset.inputs.view(), dataset.targets.view(), fit)?;
    let last = net.layers().len() - 1;
    net.layer_params_mut(last).1.mapv_inplace(|b| b - SPIKE_THRESHOLD);
    net.set_activation(last, Activation::Heaviside);
    Ok((MembraneEmulator::from_net(net)?, history))
}

/// Fraction of equal bits between two equally shaped binary matrices.
pub fn bit_agreement(a: ArrayView2<'_, f64>, b: ArrayView2<'_, f64>) -> Result<f64> {
    if a.dim() != b.dim() || a.is_empty() {
        return Err(Error::dim(format!("cannot compare {:?} with {:?}", a.dim(), b.dim())));
    }
    let same = a.iter().zip(b.iter()).filter(|(x, y)| x == y).count();
    Ok(same as f64 / a.len() as f64)
}

/// Rate-encodes each image over `window` steps (image `i` uses seed
/// `seed + i`) and pairs every pixel's train with the Euler LIF response.
/// Silent pixels are dropped apart from `keep_blank` of them.
pub fn mnist_membrane_dataset(
    records: &[MnistRecord],
    window: usize,
    seed: u64,
    cfg: &LifConfig,
    keep_blank: usize,
) -> Result<MembraneDataset> {
    let trains = records
        .iter()
        .enumerate()
        .map(|(i, r)| rate_encode(&r.pixels_f64(), window, seed.wrapping_add(i as u64)))
        .collect::<Result<Vec<_>>>()?;
    Ok(generate_membrane_dataset(LifSource::Euler, &trains, cfg)?.filter_active(keep_blank))
}

// ------------------------------------------------------------------- ricker

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RickerSetup {
    /// Points per axis; the task has `n_grid²` points.
    pub n_grid: usize,
    /// Steps per coordinate. A point's window is `2 · n_t` steps: the
    /// lower-triangular code of `x` followed by that of `y`.
    pub n_t: usize,
    /// Widths of the read-out network on the membrane output window.
    pub head_widths: Vec<usize>,
    pub fit: FitConfig,
    pub init_seed: u64,
    pub timing_reps: usize,
    /// Points per timed membrane call; times are reported per point.
    pub timing_chunk: usize,
}

impl Default for RickerSetup {
    fn default() -> Self {
        Self {
            n_grid: 100,
            n_t: 20,
            head_widths: vec![100, 1],
            fit: FitConfig {
                epochs: 30,
                batch_size: 32,
                lr: 1e-3,
                seed: 0,
            },
            init_seed: 0,
            timing_reps: 5,
            timing_chunk: 100,
        }
    }
}

impl RickerSetup {
    pub fn window(&self) -> usize {
        2 * self.n_t
    }
}

/// Encoded Ricker task: `window × points` input currents and the targets.
#[derive(Debug, Clone)]
pub struct RickerTask {
    pub currents: Array2<f64>,
    pub targets: Vec<f64>,
    pub points: Vec<(f64, f64)>,
}

pub fn ricker_task(setup: &RickerSetup) -> Result<RickerTask> {
    let (axis, idx, targets) = ricker_grid(setup.n_grid, RICKER_SIGMA)?;
    let code = lower_triangle_encode_coarse(&axis, setup.n_t)?.to_f64();
    let n_t = setup.n_t;
    let mut currents = Array2::zeros((2 * n_t, idx.len()));
    for (r, &(i, j)) in idx.iter().enumerate() {
        currents.slice_mut(s![..n_t, r]).assign(&code.column(i));
        currents.slice_mut(s![n_t.., r]).assign(&code.column(j));
    }
    let points = idx.iter().map(|&(i, j)| (axis.point(i), axis.point(j))).collect();
    Ok(RickerTask {
        currents,
        targets,
        points,
    })
}

/// One backend's row of the comparison table.
#[derive(Debug, Clone)]
pub struct RickerResult {
    pub backend: String,
    /// Per-point squared errors with the membrane's per-point response time.
    pub report: EvalReport,
    pub predictions: Vec<f64>,
    pub output_spikes: f64,
}

/// Feeds every point's window through `membrane`, trains the read-out on
/// the responses and scores it on all points. The response time is the
/// median per-point wall-clock of `membrane` alone.
pub fn ricker_regression(membrane: &dyn MembraneModel, task: &RickerTask, setup: &RickerSetup) -> Result<RickerResult> {
    let response = membrane.respond(task.currents.view())?;
    let x = response.t().as_standard_layout().into_owned();
    let n = task.targets.len();
    let y = Array2::from_shape_vec((n, 1), task.targets.clone()).map_err(|e| Error::dim(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(setup.init_seed);
    let mut head = DenseNet::mlp(x.ncols(), &setup.head_widths, &mut rng)?;
    if head.output_dim() != 1 {
        return Err(Error::arg("the read-out must end in one unit"));
    }
    fit_mse(&mut head, x.view(), y.view(), &setup.fit)?;
    let predictions = head.predict_batch(x.view())?.column(0).to_vec();
    let errors = predictions
        .iter()
        .zip(&task.targets)
        .map(|(p, t)| (p - t) * (p - t))
        .collect();
    let chunk = setup.timing_chunk.clamp(1, n);
    let starts: Vec<usize> = (0..n).step_by(chunk).filter(|&c| c + chunk <= n).collect();
    let mut failed = None;
    let ms = time_per_sample(
        |&c| {
            if let Err(e) = membrane.respond(task.currents.slice(s![.., c..c + chunk])) {
                failed = Some(e);
            }
        },
        &starts,
        setup.timing_reps,
    )? / chunk as f64;
    if let Some(e) = failed {
        return Err(e);
    }
    Ok(RickerResult {
        backend: membrane.name().to_string(),
        report: EvalReport::from_errors(errors, Some(ms))?,
        predictions,
        output_spikes: response.sum(),
    })
}
