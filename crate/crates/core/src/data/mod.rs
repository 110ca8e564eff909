//! Dataset generation and ingestion.

mod functions;
mod grf;
mod mnist;

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use functions::{ricker2d, ricker_grid, square, step, TestFunction, RICKER_SIGMA};
pub use grf::{add_noise, grf_sample, poisson_solve_1d, rbf_kernel, GrfSampler};
pub use mnist::{
    load_mnist, load_mnist_limit, load_mnist_split, parse_mnist, resolve_mnist_dir, sha256_file,
    sha256_hex, verify_mnist_dir, MnistRecord, CHECKSUMS, DATA_DIR_ENV, IMAGE_MAGIC, LABEL_MAGIC,
    PIXELS, TEST_IMAGES, TEST_LABELS, TRAIN_IMAGES, TRAIN_LABELS,
};

use crate::encoding::IntervalGrid;
use crate::error::{Error, Result};

/// A random right-hand side and its Poisson solution on one grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GrfSample {
    pub grid: IntervalGrid,
    pub f_values: Vec<f64>,
    pub u_values: Vec<f64>,
}

/// Settings of a generated Poisson dataset.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoissonDatasetSpec {
    pub samples: usize,
    pub n_x: usize,
    pub a: f64,
    pub b: f64,
    pub length_scale: f64,
    pub seed: u64,
}

impl Default for PoissonDatasetSpec {
    fn default() -> Self {
        Self {
            samples: 1000,
            n_x: 100,
            a: 0.0,
            b: 1.0,
            length_scale: 1.0,
            seed: 0,
        }
    }
}

/// Sample `i` draws its field from seed `spec.seed + i`.
pub fn grf_poisson_dataset(spec: &PoissonDatasetSpec) -> Result<Vec<GrfSample>> {
    if spec.samples == 0 {
        return Err(Error::EmptyDataset);
    }
    let grid = IntervalGrid::new(spec.a, spec.b, spec.n_x)?;
    let sampler = GrfSampler::new(&grid, spec.length_scale)?;
    (0..spec.samples)
        .map(|i| {
            let f_values = sampler.sample(spec.seed.wrapping_add(i as u64));
            let u_values = poisson_solve_1d(&f_values, &grid)?;
            Ok(GrfSample {
                grid,
                f_values,
                u_values,
            })
        })
        .collect()
}

/// Disjoint train/test index sets from a seeded shuffle. Both are sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Split {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

impl Split {
    pub fn new(total: usize, n_train: usize, seed: u64) -> Result<Self> {
        if n_train > total {
            return Err(Error::arg(format!("cannot take {n_train} training samples of {total}")));
        }
        let mut order: Vec<usize> = (0..total).collect();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let mut train = order[..n_train].to_vec();
        let mut test = order[n_train..].to_vec();
        train.sort_unstable();
        test.sort_unstable();
        Ok(Self { train, test })
    }

    /// Hash of the index lists, for checking that runs shared a split.
    pub fn fingerprint(&self) -> String {
        let text = serde_json::to_string(self).expect("index lists serialize");
        sha256_hex(text.as_bytes())
    }
}

/// Writes `sample,x,f,u` rows.
pub fn poisson_dataset_csv(samples: &[GrfSample]) -> String {
    let mut out = String::from("sample,x,f,u\n");
    for (s, sample) in samples.iter().enumerate() {
        for (k, x) in sample.grid.points().iter().enumerate() {
            let _ = writeln!(out, "{s},{x},{},{}", sample.f_values[k], sample.u_values[k]);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub spec: PoissonDatasetSpec,
    pub split_seed: u64,
    pub split: Split,
    pub csv_sha256: String,
}

/// Persists the dataset as `poisson.csv` plus `poisson.json` in `dir`.
pub fn save_poisson_dataset(
    dir: &Path,
    spec: &PoissonDatasetSpec,
    samples: &[GrfSample],
    split: &Split,
    split_seed: u64,
) -> Result<DatasetManifest> {
    fs::create_dir_all(dir)?;
    let csv = poisson_dataset_csv(samples);
    fs::write(dir.join("poisson.csv"), &csv)?;
    let manifest = DatasetManifest {
        spec: *spec,
        split_seed,
        split: split.clone(),
        csv_sha256: sha256_hex(csv.as_bytes()),
    };
    fs::write(dir.join("poisson.json"), serde_json::to_vec_pretty(&manifest)?)?;
    Ok(manifest)
}
