use ndarray::{Array1, Array2, ArrayView1, ArrayView2};

use crate::error::{Error, Result};

/// Mean squared error `mean((pred - target)^2)` and its gradient w.r.t. `pred`.
pub fn mse_loss(pred: ArrayView1<'_, f64>, target: ArrayView1<'_, f64>) -> Result<(f64, Array1<f64>)> {
    if pred.len() != target.len() || pred.is_empty() {
        return Err(Error::dim(format!(
            "mse needs equal non-empty lengths, got {} and {}",
            pred.len(),
            target.len()
        )));
    }
    let n = pred.len() as f64;
    let diff = &pred - &target;
    let loss = diff.iter().map(|d| d * d).sum::<f64>() / n;
    Ok((loss, diff.mapv(|d| 2.0 * d / n)))
}

/// Mean squared error over every element of a batch.
pub fn mse_loss_batch(
    pred: ArrayView2<'_, f64>,
    target: ArrayView2<'_, f64>,
) -> Result<(f64, Array2<f64>)> {
    if pred.dim() != target.dim() || pred.is_empty() {
        return Err(Error::dim(format!(
            "mse needs equal non-empty shapes, got {:?} and {:?}",
            pred.dim(),
            target.dim()
        )));
    }
    let n = pred.len() as f64;
    let diff = &pred - &target;
    let loss = diff.iter().map(|d| d * d).sum::<f64>() / n;
    Ok((loss, diff.mapv(|d| 2.0 * d / n)))
}

/// Softmax cross-entropy of `logits` against class index `class`.
pub fn cross_entropy_loss(logits: ArrayView1<'_, f64>, class: usize) -> Result<(f64, Array1<f64>)> {
    if class >= logits.len() {
        return Err(Error::arg(format!(
            "class {class} out of range for {} logits",
            logits.len()
        )));
    }
    let max = logits.fold(f64::NEG_INFINITY, |m, &v| m.max(v));
    let exp = logits.mapv(|v| (v - max).exp());
    let total = exp.sum();
    let log_total = total.ln() + max;
    let loss = log_total - logits[class];
    let mut grad = exp / total;
    grad[class] -= 1.0;
    Ok((loss, grad))
}
