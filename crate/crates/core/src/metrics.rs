//! Error metrics, Savitzky-Golay smoothing and per-sample timing.

use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sum of squared differences `Σ (pred - truth)²`. No root, no mean.
pub fn l2_error(pred: &[f64], truth: &[f64]) -> Result<f64> {
    if pred.len() != truth.len() {
        return Err(Error::dim(format!(
            "l2_error needs equal lengths, got {} and {}",
            pred.len(),
            truth.len()
        )));
    }
    Ok(pred
        .iter()
        .zip(truth)
        .map(|(p, t)| (p - t) * (p - t))
        .sum())
}

/// Fraction of matching entries.
pub fn accuracy(predictions: &[usize], labels: &[usize]) -> Result<f64> {
    if predictions.len() != labels.len() || labels.is_empty() {
        return Err(Error::dim(format!(
            "accuracy needs equal non-empty lengths, got {} and {}",
            predictions.len(),
            labels.len()
        )));
    }
    let hits = predictions.iter().zip(labels).filter(|(p, l)| p == l).count();
    Ok(hits as f64 / labels.len() as f64)
}

fn check_savgol(window: usize, polyorder: usize) -> Result<()> {
    if window % 2 == 0 {
        return Err(Error::arg(format!("Savitzky-Golay window must be odd, got {window}")));
    }
    if polyorder >= window {
        return Err(Error::arg(format!(
            "polyorder {polyorder} must be below the window {window}"
        )));
    }
    Ok(())
}

/// Least-squares weights that evaluate the degree-`polyorder` fit to
/// `window` consecutive samples at offset `at` (0-based within the window).
pub fn savgol_weights(window: usize, polyorder: usize, at: usize) -> Result<Vec<f64>> {
    check_savgol(window, polyorder)?;
    if at >= window {
        return Err(Error::arg("evaluation offset outside the window"));
    }
    let half = (window / 2) as f64;
    let scale = half.max(1.0);
    let x = |i: usize| (i as f64 - half) / scale;
    let cols = polyorder + 1;
    let design = DMatrix::from_fn(window, cols, |i, j| x(i).powi(j as i32));
    let normal = design.transpose() * &design;
    let chol = normal
        .cholesky()
        .ok_or_else(|| Error::Numeric("singular Savitzky-Golay normal matrix".into()))?;
    let basis = DVector::from_fn(cols, |j, _| x(at).powi(j as i32));
    let solved = chol.solve(&basis);
    Ok((design * solved).iter().copied().collect())
}

/// Savitzky-Golay smoothing. Interior points use the centred window; the
/// first and last `window / 2` points are evaluated from the polynomial fitted
/// to the first or last `window` samples.
pub fn savgol_smooth(values: &[f64], window: usize, polyorder: usize) -> Result<Vec<f64>> {
    check_savgol(window, polyorder)?;
    let n = values.len();
    if n < window {
        return Err(Error::arg(format!(
            "signal of length {n} is shorter than the window {window}"
        )));
    }
    let half = window / 2;
    let centre = savgol_weights(window, polyorder, half)?;
    let mut out = vec![0.0; n];
    for i in half..n - half {
        out[i] = centre
            .iter()
            .zip(&values[i - half..=i + half])
            .map(|(w, v)| w * v)
            .sum();
    }
    for i in 0..half {
        let w = savgol_weights(window, polyorder, i)?;
        out[i] = w.iter().zip(&values[..window]).map(|(w, v)| w * v).sum();
        let tail = &values[n - window..];
        let w = savgol_weights(window, polyorder, window - 1 - i)?;
        out[n - 1 - i] = w.iter().zip(tail).map(|(w, v)| w * v).sum();
    }
    Ok(out)
}

/// Median wall-clock milliseconds per item over `repetitions` passes of `f`
/// over the whole batch.
pub fn time_per_sample<T, F>(mut f: F, batch: &[T], repetitions: usize) -> Result<f64>
where
    F: FnMut(&T),
{
    if batch.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let reps = repetitions.max(5);
    let mut per_sample: Vec<f64> = (0..reps)
        .map(|_| {
            let start = Instant::now();
            for item in batch {
                f(item);
            }
            start.elapsed().as_secs_f64() * 1e3 / batch.len() as f64
        })
        .collect();
    Ok(median(&mut per_sample))
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// Summary of per-sample errors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub per_sample: Vec<f64>,
    pub mean: f64,
    pub median: f64,
    /// Population standard deviation.
    pub std: f64,
    pub time_per_sample_ms: Option<f64>,
}

impl EvalReport {
    pub fn from_errors(per_sample: Vec<f64>, time_per_sample_ms: Option<f64>) -> Result<Self> {
        if per_sample.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let n = per_sample.len() as f64;
        let mean = per_sample.iter().sum::<f64>() / n;
        let var = per_sample.iter().map(|e| (e - mean) * (e - mean)).sum::<f64>() / n;
        let median = median(&mut per_sample.clone());
        Ok(Self {
            per_sample,
            mean,
            median,
            std: var.sqrt(),
            time_per_sample_ms,
        })
    }

    pub const CSV_HEADER: &'static str = "label,mean_l2,median_l2,std_l2";

    /// One CSV row in `CSV_HEADER` order. Timing is kept out of this row so
    /// reruns produce identical files.
    pub fn csv_row(&self, label: &str) -> String {
        format!("{label},{:.9},{:.9},{:.9}", self.mean, self.median, self.std)
    }

    pub fn summary_json(&self, label: &str) -> serde_json::Value {
        serde_json::json!({
            "label": label,
            "mean": self.mean,
            "median": self.median,
            "std": self.std,
            "time_per_sample_ms": self.time_per_sample_ms,
            "samples": self.per_sample.len(),
        })
    }
}
