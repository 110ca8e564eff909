//! Minibatch Adam on a mean-squared-error objective.

use ndarray::{Array2, ArrayView2, Axis};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{mse_loss_batch, AdamConfig, AdamState, DenseNet};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FitConfig {
    pub epochs: usize,
    pub batch_size: usize,
    pub lr: f64,
    /// Seeds the per-epoch shuffle.
    pub seed: u64,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            epochs: 100,
            batch_size: 32,
            lr: 1e-3,
            seed: 0,
        }
    }
}

/// Trains `net` on rows of `inputs` against rows of `targets`. Returns the
/// mean training loss of every epoch.
pub fn fit_mse(
    net: &mut DenseNet,
    inputs: ArrayView2<'_, f64>,
    targets: ArrayView2<'_, f64>,
    cfg: &FitConfig,
) -> Result<Vec<f64>> {
    let n = inputs.nrows();
    if n == 0 {
        return Err(Error::EmptyDataset);
    }
    if targets.nrows() != n || targets.ncols() != net.output_dim() {
        return Err(Error::dim(format!(
            "targets are {:?}, expected ({n}, {})",
            targets.dim(),
            net.output_dim()
        )));
    }
    if cfg.batch_size == 0 {
        return Err(Error::arg("batch size must be positive"));
    }
    let mut adam = AdamState::new(&net.param_shapes(), AdamConfig::with_lr(cfg.lr));
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut order: Vec<usize> = (0..n).collect();
    let mut history = Vec::with_capacity(cfg.epochs);
    for _ in 0..cfg.epochs {
        order.shuffle(&mut rng);
        let mut total = 0.0;
        for chunk in order.chunks(cfg.batch_size) {
            let x: Array2<f64> = inputs.select(Axis(0), chunk);
            let y: Array2<f64> = targets.select(Axis(0), chunk);
            let (pred, cache) = net.forward_batch(x.view())?;
            let (loss, grad) = mse_loss_batch(pred.view(), y.view())?;
            let grads = net.backward(&cache, grad.view())?;
            net.apply_adam(&grads, &mut adam)?;
            total += loss * chunk.len() as f64;
        }
        let mean = total / n as f64;
        if !mean.is_finite() {
            return Err(Error::Numeric(format!("training loss became {mean}")));
        }
        history.push(mean);
    }
    Ok(history)
}
