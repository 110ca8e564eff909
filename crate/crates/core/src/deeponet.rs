//! Un-stacked DeepONet `G(y)(x) = Σ αᵢ(y) φᵢ(x) + b` with optional spiking
//! front-ends on the branch or the trunk.
//!
//! Training works on a branch feature matrix (`n × d_b`), a trunk feature
//! matrix (`m × d_t`) and an `n × m` target table: every branch input is
//! evaluated against every trunk input. Classification uses the ten digits as
//! trunk inputs; regression uses the grid points.

use std::path::Path;

use ndarray::{s, Array1, Array2, ArrayView1, ArrayView2, Axis, CowArray, Ix2};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::data::{GrfSample, MnistRecord, Split};
use crate::encoding::{rate_encode, GridEncoder, IntervalGrid, SpikeTrain};
use crate::error::{Error, Result};
use crate::membrane::{lif_euler_run, LifConfig};
use crate::metrics::{accuracy, l2_error, savgol_smooth, EvalReport};
use crate::nn::{fit_mse, AdamConfig, AdamState, Checkpoint, DenseNet, FitConfig};
use crate::synapse::{static_apply, SynapseWeights};

/// Spiking stage ahead of a dense net. It has no trainable parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FrontEnd {
    None,
    /// Per-pixel rate code, LIF, spike counts divided by `n_t`.
    RateLif { n_t: usize, seed: u64, lif: LifConfig },
    /// Grid code, LIF, one-to-one static synapse, spike counts divided by the
    /// number of encoded steps.
    GridLif {
        encoder: GridEncoder,
        n_t: usize,
        lif: LifConfig,
    },
}

impl FrontEnd {
    pub fn is_spiking(&self) -> bool {
        !matches!(self, FrontEnd::None)
    }

    pub fn num_params(&self) -> usize {
        0
    }
}

/// Normalized LIF spike counts of rate-coded intensity vectors. Row `i` uses
/// encoder seed `seed + i`.
pub fn rate_lif_features(images: &[Vec<f64>], n_t: usize, seed: u64, lif: &LifConfig) -> Result<Array2<f64>> {
    let first = images.first().ok_or(Error::EmptyDataset)?;
    let mut out = Array2::zeros((images.len(), first.len()));
    for (i, pixels) in images.iter().enumerate() {
        let train = rate_encode(pixels, n_t, seed.wrapping_add(i as u64))?;
        let trace = lif_euler_run(lif, train.to_f64().view())?;
        let counts = trace.spikes.to_f64().sum_axis(Axis(0)) / n_t as f64;
        out.row_mut(i).assign(&counts);
    }
    Ok(out)
}

/// Trunk features of every grid point as an `N_x × 1` matrix.
pub fn grid_lif_features(
    grid: &IntervalGrid,
    encoder: &GridEncoder,
    n_t: usize,
    lif: &LifConfig,
) -> Result<Array2<f64>> {
    let currents = encoder.encode_grid(grid, n_t)?;
    let steps = currents.nrows() as f64;
    let spikes = lif_euler_run(lif, currents.view())?.spikes;
    let synapse = SynapseWeights::static_ones(1, 1);
    let mut out = Array2::zeros((grid.n, 1));
    for k in 0..grid.n {
        let column = SpikeTrain::new(spikes.data().slice(s![.., k..k + 1]).to_owned(), spikes.dt())?;
        out[[k, 0]] = static_apply(&synapse, &column)?.sum() / steps;
    }
    Ok(out)
}

/// Inner product of the latent vectors plus the bias.
pub fn combine(alpha: ArrayView1<'_, f64>, phi: ArrayView1<'_, f64>, bias: f64) -> Result<f64> {
    if alpha.len() != phi.len() {
        return Err(Error::dim(format!(
            "branch latent has {} entries, trunk latent {}",
            alpha.len(),
            phi.len()
        )));
    }
    Ok(alpha.dot(&phi) + bias)
}

/// Index of the largest value; ties go to the lowest index.
pub fn argmax(values: ArrayView1<'_, f64>) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeepOnetModel {
    pub branch: DenseNet,
    pub trunk: DenseNet,
    pub bias: f64,
    /// Outputs are `output_scale · (α · φ + bias)`.
    pub output_scale: f64,
    pub branch_front: FrontEnd,
    pub trunk_front: FrontEnd,
}

impl DeepOnetModel {
    pub fn new(branch: DenseNet, trunk: DenseNet, branch_front: FrontEnd, trunk_front: FrontEnd) -> Result<Self> {
        if branch.output_dim() != trunk.output_dim() {
            return Err(Error::dim(format!(
                "branch latent width {} differs from trunk latent width {}",
                branch.output_dim(),
                trunk.output_dim()
            )));
        }
        if branch_front.is_spiking() && trunk_front.is_spiking() {
            return Err(Error::arg("only one of branch and trunk may carry a spiking front-end"));
        }
        Ok(Self {
            branch,
            trunk,
            bias: 0.0,
            output_scale: 1.0,
            branch_front,
            trunk_front,
        })
    }

    /// Glorot-initialized ReLU nets with identity latent layers.
    pub fn mlp(
        branch_in: usize,
        branch_widths: &[usize],
        trunk_in: usize,
        trunk_widths: &[usize],
        branch_front: FrontEnd,
        trunk_front: FrontEnd,
        seed: u64,
    ) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let branch = DenseNet::mlp(branch_in, branch_widths, &mut rng)?;
        let trunk = DenseNet::mlp(trunk_in, trunk_widths, &mut rng)?;
        Self::new(branch, trunk, branch_front, trunk_front)
    }

    pub fn latent_dim(&self) -> usize {
        self.branch.output_dim()
    }

    /// Output for one branch input and one trunk input (both already past
    /// their front-ends).
    pub fn forward(&self, branch_in: ArrayView1<'_, f64>, trunk_in: ArrayView1<'_, f64>) -> Result<f64> {
        let alpha = self.branch.predict(branch_in)?;
        let phi = self.trunk.predict(trunk_in)?;
        Ok(self.output_scale * combine(alpha.view(), phi.view(), self.bias)?)
    }

    /// `n × m` table of outputs for every pair of branch and trunk rows.
    pub fn predict_table(&self, branch_x: ArrayView2<'_, f64>, trunk_x: ArrayView2<'_, f64>) -> Result<Array2<f64>> {
        let b = self.branch.predict_batch(branch_x)?;
        let t = self.trunk.predict_batch(trunk_x)?;
        Ok((b.dot(&t.t()) + self.bias) * self.output_scale)
    }
}

/// Forward pass of a model on already front-ended inputs.
pub fn deeponet_forward(m: &DeepOnetModel, branch_in: ArrayView1<'_, f64>, trunk_in: ArrayView1<'_, f64>) -> Result<f64> {
    m.forward(branch_in, trunk_in)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeepOnetLoss {
    /// Mean squared error over the output table.
    Mse,
    /// Softmax cross-entropy of each row against its largest target.
    CrossEntropy,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainConfig {
    pub epochs: usize,
    pub batch_size: usize,
    pub lr: f64,
    pub seed: u64,
    pub loss: DeepOnetLoss,
    pub train_trunk: bool,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            epochs: 100,
            batch_size: 32,
            lr: 1e-3,
            seed: 0,
            loss: DeepOnetLoss::Mse,
            train_trunk: true,
        }
    }
}

fn table_loss(pred: &Array2<f64>, target: ArrayView2<'_, f64>, loss: DeepOnetLoss) -> (f64, Array2<f64>) {
    match loss {
        DeepOnetLoss::Mse => {
            let n = pred.len() as f64;
            let diff = pred - &target;
            let value = diff.iter().map(|d| d * d).sum::<f64>() / n;
            (value, diff.mapv(|d| 2.0 * d / n))
        }
        DeepOnetLoss::CrossEntropy => {
            let rows = pred.nrows() as f64;
            let mut grad = Array2::zeros(pred.dim());
            let mut value = 0.0;
            for (r, row) in pred.rows().into_iter().enumerate() {
                let class = argmax(target.row(r));
                let max = row.fold(f64::NEG_INFINITY, |a, &b| a.max(b));
                let exp = row.mapv(|v| (v - max).exp());
                let z = exp.sum();
                value += z.ln() + max - row[class];
                let mut g = exp / z;
                g[class] -= 1.0;
                grad.row_mut(r).assign(&(g / rows));
            }
            (value / rows, grad)
        }
    }
}

/// Network inputs for one training epoch.
pub enum EpochInputs<'a> {
    Fixed(ArrayView2<'a, f64>),
    /// Regenerated every epoch, e.g. a fresh rate code. Called with the
    /// epoch index.
    Resampled(Box<dyn FnMut(usize) -> Result<Array2<f64>> + 'a>),
}

impl<'a> EpochInputs<'a> {
    fn for_epoch(&mut self, epoch: usize) -> Result<CowArray<'_, f64, Ix2>> {
        match self {
            EpochInputs::Fixed(view) => Ok(CowArray::from(view.view())),
            EpochInputs::Resampled(make) => Ok(CowArray::from(make(epoch)?)),
        }
    }
}

/// Minibatch Adam over branch rows; the whole trunk table is evaluated each
/// step. `targets` are in output units; they are divided by the model's
/// `output_scale` before the loss. Returns the mean loss of every epoch.
pub fn train_deeponet(
    model: &mut DeepOnetModel,
    branch_x: ArrayView2<'_, f64>,
    trunk_x: ArrayView2<'_, f64>,
    targets: ArrayView2<'_, f64>,
    cfg: &TrainConfig,
) -> Result<Vec<f64>> {
    train_deeponet_with(
        model,
        EpochInputs::Fixed(branch_x),
        EpochInputs::Fixed(trunk_x),
        targets,
        cfg,
    )
}

pub fn train_deeponet_with(
    model: &mut DeepOnetModel,
    mut branch_inputs: EpochInputs<'_>,
    mut trunk_inputs: EpochInputs<'_>,
    targets: ArrayView2<'_, f64>,
    cfg: &TrainConfig,
) -> Result<Vec<f64>> {
    let n = targets.nrows();
    if n == 0 || targets.ncols() == 0 {
        return Err(Error::EmptyDataset);
    }
    if cfg.batch_size == 0 {
        return Err(Error::arg("batch size must be positive"));
    }
    let adam_cfg = AdamConfig::with_lr(cfg.lr);
    let mut branch_adam = AdamState::new(&model.branch.param_shapes(), adam_cfg);
    let mut trunk_adam = AdamState::new(&model.trunk.param_shapes(), adam_cfg);
    let mut bias_adam = AdamState::new(&[1], adam_cfg);
    let scaled = &targets / model.output_scale;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut order: Vec<usize> = (0..n).collect();
    let mut history = Vec::with_capacity(cfg.epochs);
    for epoch in 0..cfg.epochs {
        let branch_x = branch_inputs.for_epoch(epoch)?;
        let trunk_x = trunk_inputs.for_epoch(epoch)?;
        if branch_x.nrows() != n || trunk_x.nrows() != targets.ncols() {
            return Err(Error::dim(format!(
                "targets are {:?}, inputs give ({}, {})",
                targets.dim(),
                branch_x.nrows(),
                trunk_x.nrows()
            )));
        }
        order.shuffle(&mut rng);
        let mut total = 0.0;
        for chunk in order.chunks(cfg.batch_size) {
            let xb = branch_x.select(Axis(0), chunk);
            let yb = scaled.select(Axis(0), chunk);
            let (b, b_cache) = model.branch.forward_batch(xb.view())?;
            let (t, t_cache) = model.trunk.forward_batch(trunk_x.view())?;
            let pred = b.dot(&t.t()) + model.bias;
            let (loss, g) = table_loss(&pred, yb.view(), cfg.loss);
            total += loss * chunk.len() as f64;

            let db = g.dot(&t);
            let grads = model.branch.backward(&b_cache, db.view())?;
            model.branch.apply_adam(&grads, &mut branch_adam)?;
            if cfg.train_trunk {
                let dt = g.t().dot(&b);
                let grads = model.trunk.backward(&t_cache, dt.view())?;
                model.trunk.apply_adam(&grads, &mut trunk_adam)?;
                let mut bias = [model.bias];
                bias_adam.step(&mut [&mut bias[..]], &[&[g.sum()][..]])?;
                model.bias = bias[0];
            }
        }
        let mean = total / n as f64;
        if !mean.is_finite() {
            return Err(Error::Numeric(format!("training loss became {mean} at epoch {epoch}")));
        }
        history.push(mean);
    }
    Ok(history)
}

pub const ENVELOPE_VERSION: &str = "spikeonet-deeponet-1";

/// Two network checkpoints plus the front-end descriptors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeepOnetEnvelope {
    pub version: String,
    pub branch: Checkpoint,
    pub trunk: Checkpoint,
    pub bias: f64,
    pub output_scale: f64,
    pub branch_front: FrontEnd,
    pub trunk_front: FrontEnd,
}

impl DeepOnetModel {
    pub fn to_envelope(&self) -> DeepOnetEnvelope {
        DeepOnetEnvelope {
            version: ENVELOPE_VERSION.to_owned(),
            branch: Checkpoint::from_net(&self.branch, Some("branch")),
            trunk: Checkpoint::from_net(&self.trunk, Some("trunk")),
            bias: self.bias,
            output_scale: self.output_scale,
            branch_front: self.branch_front,
            trunk_front: self.trunk_front,
        }
    }

    pub fn from_envelope(env: &DeepOnetEnvelope) -> Result<Self> {
        if env.version != ENVELOPE_VERSION {
            return Err(Error::Format(format!("unsupported model version {:?}", env.version)));
        }
        let mut m = Self::new(env.branch.to_net()?, env.trunk.to_net()?, env.branch_front, env.trunk_front)?;
        m.bias = env.bias;
        m.output_scale = env.output_scale;
        Ok(m)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_vec_pretty(&self.to_envelope())?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_envelope(&serde_json::from_slice(&std::fs::read(path)?)?)
    }
}

// ---------------------------------------------------------------- regression

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RegressionSetup {
    pub encoder: GridEncoder,
    pub n_t: usize,
    pub lif: LifConfig,
    pub branch_widths: Vec<usize>,
    pub trunk_widths: Vec<usize>,
    pub train: TrainConfig,
    /// Savitzky-Golay window and order applied to predictions.
    pub smoothing: Option<(usize, usize)>,
    pub init_seed: u64,
}

impl Default for RegressionSetup {
    fn default() -> Self {
        Self {
            encoder: GridEncoder::LowerTriangular,
            n_t: 50,
            lif: LifConfig::default(),
            branch_widths: vec![30, 30],
            trunk_widths: vec![30, 30],
            train: TrainConfig {
                epochs: 500,
                batch_size: 32,
                lr: 1e-3,
                seed: 0,
                loss: DeepOnetLoss::Mse,
                train_trunk: true,
            },
            smoothing: Some((51, 3)),
            init_seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RegressionOutcome {
    pub model: DeepOnetModel,
    /// Errors of the unsmoothed test predictions.
    pub raw: EvalReport,
    /// Errors after smoothing, or the raw errors when smoothing is off.
    pub smoothed: EvalReport,
    /// `test × N_x` predictions before smoothing.
    pub predictions: Array2<f64>,
    pub history: Vec<f64>,
}

fn rows_of(values: impl Iterator<Item = Vec<f64>>, width: usize) -> Result<Array2<f64>> {
    let flat: Vec<f64> = values.flatten().collect();
    let rows = flat.len() / width.max(1);
    Array2::from_shape_vec((rows, width), flat).map_err(|e| Error::dim(e.to_string()))
}

/// Trains the spiking-trunk DeepONet on the training indices of `samples`
/// and scores the test indices.
pub fn train_regression(samples: &[GrfSample], split: &Split, setup: &RegressionSetup) -> Result<RegressionOutcome> {
    let first = samples.first().ok_or(Error::EmptyDataset)?;
    let grid = first.grid;
    if samples.iter().any(|s| s.grid != grid) {
        return Err(Error::arg("all samples must share one grid"));
    }
    if split.train.is_empty() || split.test.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if let Some(&bad) = split.train.iter().chain(&split.test).find(|&&i| i >= samples.len()) {
        return Err(Error::arg(format!("split index {bad} outside {} samples", samples.len())));
    }
    let trunk_x = grid_lif_features(&grid, &setup.encoder, setup.n_t, &setup.lif)?;
    let pick = |idx: &[usize], f: fn(&GrfSample) -> &Vec<f64>| {
        rows_of(idx.iter().map(|&i| f(&samples[i]).clone()), grid.n)
    };
    let train_f = pick(&split.train, |s| &s.f_values)?;
    let train_u = pick(&split.train, |s| &s.u_values)?;
    let test_f = pick(&split.test, |s| &s.f_values)?;
    let test_u = pick(&split.test, |s| &s.u_values)?;

    let front = FrontEnd::GridLif {
        encoder: setup.encoder,
        n_t: setup.n_t,
        lif: setup.lif,
    };
    let mut model = DeepOnetModel::mlp(
        grid.n,
        &setup.branch_widths,
        1,
        &setup.trunk_widths,
        FrontEnd::None,
        front,
        setup.init_seed,
    )?;
    let spread = train_u.std(0.0);
    model.output_scale = if spread > 0.0 { spread } else { 1.0 };
    let history = match setup.encoder {
        GridEncoder::Rate { seed } => {
            let resample = move |epoch: usize| {
                let fresh = GridEncoder::Rate {
                    seed: seed.wrapping_add(1 + epoch as u64),
                };
                grid_lif_features(&grid, &fresh, setup.n_t, &setup.lif)
            };
            train_deeponet_with(
                &mut model,
                EpochInputs::Fixed(train_f.view()),
                EpochInputs::Resampled(Box::new(resample)),
                train_u.view(),
                &setup.train,
            )?
        }
        _ => train_deeponet(&mut model, train_f.view(), trunk_x.view(), train_u.view(), &setup.train)?,
    };

    let predictions = model.predict_table(test_f.view(), trunk_x.view())?;
    let mut raw = Vec::with_capacity(split.test.len());
    let mut smooth = Vec::with_capacity(split.test.len());
    for (pred, truth) in predictions.rows().into_iter().zip(test_u.rows()) {
        let pred = pred.to_vec();
        let truth = truth.to_vec();
        raw.push(l2_error(&pred, &truth)?);
        smooth.push(match setup.smoothing {
            Some((window, order)) => l2_error(&savgol_smooth(&pred, window, order)?, &truth)?,
            None => *raw.last().expect("just pushed"),
        });
    }
    Ok(RegressionOutcome {
        model,
        raw: EvalReport::from_errors(raw, None)?,
        smoothed: EvalReport::from_errors(smooth, None)?,
        predictions,
        history,
    })
}

// ------------------------------------------------------------ classification

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClassificationSetup {
    pub n_t: usize,
    pub encode_seed: u64,
    pub lif: LifConfig,
    pub branch_widths: Vec<usize>,
    pub trunk_widths: Vec<usize>,
    pub train: TrainConfig,
    pub init_seed: u64,
}

impl Default for ClassificationSetup {
    fn default() -> Self {
        Self {
            n_t: 25,
            encode_seed: 0,
            lif: LifConfig::default(),
            branch_widths: vec![512, 250, 50],
            trunk_widths: vec![50, 50],
            train: TrainConfig {
                epochs: 15,
                batch_size: 64,
                lr: 1e-3,
                seed: 0,
                loss: DeepOnetLoss::Mse,
                train_trunk: true,
            },
            init_seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ClassificationOutcome {
    pub model: DeepOnetModel,
    pub train_accuracy: f64,
    pub test_accuracy: f64,
    pub test_predictions: Vec<usize>,
    pub history: Vec<f64>,
}

/// Trunk inputs `d / 9` for the ten digits.
pub fn digit_trunk_inputs() -> Array2<f64> {
    Array2::from_shape_fn((10, 1), |(d, _)| d as f64 / 9.0)
}

/// Kronecker-delta targets: row `i` is one at column `labels[i]`.
pub fn delta_targets(labels: &[usize]) -> Array2<f64> {
    let mut t = Array2::zeros((labels.len(), 10));
    for (i, &l) in labels.iter().enumerate() {
        t[[i, l]] = 1.0;
    }
    t
}

/// Moves the kink of every first-layer unit of a scalar-input net to a
/// uniform point of `[0, 1]`. With zero biases all kinks sit at the origin
/// and the net is affine on `[0, 1]`, so the ten digit inputs would span a
/// two-dimensional trunk space.
pub fn spread_kinks(net: &mut DenseNet, seed: u64) {
    if net.input_dim() != 1 || net.layers().len() < 2 {
        return;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6b69_6e6b);
    let (w, b) = net.layer_params_mut(0);
    for (wj, bj) in w.column(0).iter().zip(b.iter_mut()) {
        *bj = -wj * rng.random::<f64>();
    }
}

/// Argmax over the ten trunk evaluations of every branch row.
pub fn classify(model: &DeepOnetModel, branch_x: ArrayView2<'_, f64>) -> Result<Vec<usize>> {
    let table = model.predict_table(branch_x, digit_trunk_inputs().view())?;
    Ok(table.rows().into_iter().map(argmax).collect())
}

fn mnist_features(records: &[MnistRecord], setup: &ClassificationSetup, seed: u64) -> Result<(Array2<f64>, Vec<usize>)> {
    let images: Vec<Vec<f64>> = records.iter().map(MnistRecord::pixels_f64).collect();
    let x = rate_lif_features(&images, setup.n_t, seed, &setup.lif)?;
    let labels = records.iter().map(|r| usize::from(r.label)).collect();
    Ok((x, labels))
}

/// Spiking-branch classifier. Test images are encoded with seeds following
/// the training images so no rate code is reused.
pub fn train_classification(
    train: &[MnistRecord],
    test: &[MnistRecord],
    setup: &ClassificationSetup,
) -> Result<ClassificationOutcome> {
    if train.is_empty() || test.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let (train_x, train_labels) = mnist_features(train, setup, setup.encode_seed)?;
    let test_seed = setup.encode_seed.wrapping_add(train.len() as u64);
    let (test_x, test_labels) = mnist_features(test, setup, test_seed)?;
    let front = FrontEnd::RateLif {
        n_t: setup.n_t,
        seed: setup.encode_seed,
        lif: setup.lif,
    };
    let mut model = DeepOnetModel::mlp(
        train_x.ncols(),
        &setup.branch_widths,
        1,
        &setup.trunk_widths,
        front,
        FrontEnd::None,
        setup.init_seed,
    )?;
    spread_kinks(&mut model.trunk, setup.init_seed);
    let trunk_x = digit_trunk_inputs();
    let targets = delta_targets(&train_labels);
    let history = train_deeponet(&mut model, train_x.view(), trunk_x.view(), targets.view(), &setup.train)?;
    let train_pred = classify(&model, train_x.view())?;
    let test_predictions = classify(&model, test_x.view())?;
    Ok(ClassificationOutcome {
        train_accuracy: accuracy(&train_pred, &train_labels)?,
        test_accuracy: accuracy(&test_predictions, &test_labels)?,
        model,
        test_predictions,
        history,
    })
}

// --------------------------------------------------------------------- naive

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NaiveSetup {
    pub encoder: GridEncoder,
    pub n_t: usize,
    pub lif: LifConfig,
    pub fit: FitConfig,
    pub init_seed: u64,
}

impl Default for NaiveSetup {
    fn default() -> Self {
        Self {
            encoder: GridEncoder::Latency,
            n_t: 50,
            lif: LifConfig::default(),
            fit: FitConfig {
                epochs: 3000,
                batch_size: 1,
                lr: 2e-3,
                seed: 0,
            },
            init_seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct NaiveOutcome {
    pub fitted: Vec<f64>,
    /// Error against the training targets.
    pub l2: f64,
    pub history: Vec<f64>,
    /// Per-neuron spike counts fed to the dense layers.
    pub counts: Vec<f64>,
    pub net: DenseNet,
}

/// Whole-interval fit of one function: encoded grid, LIF, spike counts, a
/// ReLU layer of width `N_x` and a linear read-out of width `N_x`.
pub fn naive_regression(grid: &IntervalGrid, targets: &[f64], setup: &NaiveSetup) -> Result<NaiveOutcome> {
    if targets.len() != grid.n {
        return Err(Error::dim(format!("{} targets for {} grid points", targets.len(), grid.n)));
    }
    let currents = setup.encoder.encode_grid(grid, setup.n_t)?;
    let counts = lif_euler_run(&setup.lif, currents.view())?
        .spikes
        .to_f64()
        .sum_axis(Axis(0));
    let mut rng = ChaCha8Rng::seed_from_u64(setup.init_seed);
    let mut net = DenseNet::mlp(grid.n, &[grid.n, grid.n], &mut rng)?;
    let x = counts.clone().insert_axis(Axis(0));
    let y = Array1::from(targets.to_vec()).insert_axis(Axis(0));
    let history = fit_mse(&mut net, x.view(), y.view(), &setup.fit)?;
    let fitted = net.predict(counts.view())?.to_vec();
    Ok(NaiveOutcome {
        l2: l2_error(&fitted, targets)?,
        fitted,
        history,
        counts: counts.to_vec(),
        net,
    })
}
