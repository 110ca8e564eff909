//! MNIST IDX reader.
//!
//! Images: magic `0x00000803`, count, rows, cols (big-endian u32), then
//! unsigned bytes. Labels: magic `0x00000801`, count, then bytes.

use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub const IMAGE_MAGIC: u32 = 0x0000_0803;
pub const LABEL_MAGIC: u32 = 0x0000_0801;
pub const PIXELS: usize = 784;

pub const TRAIN_IMAGES: &str = "train-images-idx3-ubyte";
pub const TRAIN_LABELS: &str = "train-labels-idx1-ubyte";
pub const TEST_IMAGES: &str = "t10k-images-idx3-ubyte";
pub const TEST_LABELS: &str = "t10k-labels-idx1-ubyte";

/// SHA-256 of the canonical uncompressed files.
pub const CHECKSUMS: [(&str, &str); 4] = [
    (TRAIN_IMAGES, "ba891046e6505d7aadcbbe25680a0738ad16aec93bde7f9b65e87a2fc25776db"),
    (TRAIN_LABELS, "65a50cbbf4e906d70832878ad85ccda5333a97f0f4c3dd2ef09a8a9eef7101c5"),
    (TEST_IMAGES, "0fa7898d509279e482958e8ce81c8e77db3f2f8254e26661ceb7762c4d494ce7"),
    (TEST_LABELS, "ff7bcfd416de33731a308c3f266cc351222c34898ecbeaf847f06e48f7ec33f2"),
];

pub const DATA_DIR_ENV: &str = "SPIKEONET_DATA_DIR";

#[derive(Debug, Clone, PartialEq)]
pub struct MnistRecord {
    /// Row-major 28×28 intensities in `[0, 1]`.
    pub pixels: Vec<f32>,
    pub label: u8,
}

impl MnistRecord {
    pub fn pixels_f64(&self) -> Vec<f64> {
        self.pixels.iter().map(|&p| f64::from(p)).collect()
    }
}

fn be_u32(bytes: &[u8], at: usize, what: &str) -> Result<u32> {
    bytes
        .get(at..at + 4)
        .map(|b| u32::from_be_bytes([b[0], b[1], b[2], b[3]]))
        .ok_or_else(|| Error::Format(format!("{what}: truncated header")))
}

/// Parses IDX image and label buffers, keeping at most `limit` records.
pub fn parse_mnist(images: &[u8], labels: &[u8], limit: Option<usize>) -> Result<Vec<MnistRecord>> {
    let magic = be_u32(images, 0, "images")?;
    if magic != IMAGE_MAGIC {
        return Err(Error::Format(format!("bad image magic {magic:#010x}")));
    }
    let magic = be_u32(labels, 0, "labels")?;
    if magic != LABEL_MAGIC {
        return Err(Error::Format(format!("bad label magic {magic:#010x}")));
    }
    let n_images = be_u32(images, 4, "images")? as usize;
    let rows = be_u32(images, 8, "images")? as usize;
    let cols = be_u32(images, 12, "images")? as usize;
    let n_labels = be_u32(labels, 4, "labels")? as usize;
    if rows * cols != PIXELS {
        return Err(Error::Format(format!("expected 28x28 images, got {rows}x{cols}")));
    }
    if n_images != n_labels {
        return Err(Error::Format(format!(
            "{n_images} images but {n_labels} labels"
        )));
    }
    if images.len() < 16 + n_images * PIXELS {
        return Err(Error::Format("image file truncated".into()));
    }
    if labels.len() < 8 + n_labels {
        return Err(Error::Format("label file truncated".into()));
    }
    let take = limit.map_or(n_images, |l| l.min(n_images));
    (0..take)
        .map(|i| {
            let label = labels[8 + i];
            if label > 9 {
                return Err(Error::Format(format!("label {label} at record {i}")));
            }
            let start = 16 + i * PIXELS;
            Ok(MnistRecord {
                pixels: images[start..start + PIXELS]
                    .iter()
                    .map(|&b| f32::from(b) / 255.0)
                    .collect(),
                label,
            })
        })
        .collect()
}

pub fn load_mnist(image_path: &Path, label_path: &Path) -> Result<Vec<MnistRecord>> {
    load_mnist_limit(image_path, label_path, None)
}

pub fn load_mnist_limit(
    image_path: &Path,
    label_path: &Path,
    limit: Option<usize>,
) -> Result<Vec<MnistRecord>> {
    parse_mnist(&fs::read(image_path)?, &fs::read(label_path)?, limit)
}

/// Loads the train (`true`) or test split from a directory holding the four
/// uncompressed IDX files.
pub fn load_mnist_split(dir: &Path, train: bool, limit: Option<usize>) -> Result<Vec<MnistRecord>> {
    let (images, labels) = if train {
        (TRAIN_IMAGES, TRAIN_LABELS)
    } else {
        (TEST_IMAGES, TEST_LABELS)
    };
    load_mnist_limit(&dir.join(images), &dir.join(labels), limit)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn sha256_file(path: &Path) -> Result<String> {
    Ok(sha256_hex(&fs::read(path)?))
}

/// Checks the four files in `dir` against the canonical checksums.
pub fn verify_mnist_dir(dir: &Path) -> Result<()> {
    for (name, expected) in CHECKSUMS {
        let actual = sha256_file(&dir.join(name))?;
        if actual != expected {
            return Err(Error::Format(format!(
                "{name}: checksum {actual} does not match {expected}"
            )));
        }
    }
    Ok(())
}

/// First directory among `explicit`, `$SPIKEONET_DATA_DIR/mnist` and
/// `$SPIKEONET_DATA_DIR` that holds the training images.
pub fn resolve_mnist_dir(explicit: Option<&Path>) -> Option<PathBuf> {
    let mut candidates: Vec<PathBuf> = explicit.map(Path::to_path_buf).into_iter().collect();
    if let Some(env) = std::env::var_os(DATA_DIR_ENV) {
        let root = PathBuf::from(env);
        candidates.push(root.join("mnist"));
        candidates.push(root);
    }
    candidates
        .into_iter()
        .find(|dir| dir.join(TRAIN_IMAGES).is_file())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(n: usize, magic_img: u32, magic_lbl: u32) -> (Vec<u8>, Vec<u8>) {
        let mut img = Vec::new();
        for v in [magic_img, n as u32, 28, 28] {
            img.extend_from_slice(&v.to_be_bytes());
        }
        for i in 0..n * PIXELS {
            img.push((i % 256) as u8);
        }
        let mut lbl = Vec::new();
        for v in [magic_lbl, n as u32] {
            lbl.extend_from_slice(&v.to_be_bytes());
        }
        lbl.extend((0..n).map(|i| (i % 10) as u8));
        (img, lbl)
    }

    #[test]
    fn parses_synthetic_idx() {
        let (img, lbl) = synthetic(3, IMAGE_MAGIC, LABEL_MAGIC);
        let recs = parse_mnist(&img, &lbl, None).unwrap();
        assert_eq!(recs.len(), 3);
        assert_eq!(recs[1].label, 1);
        assert_eq!(recs[0].pixels[255], 1.0);
        assert!(recs.iter().all(|r| r.pixels.iter().all(|&p| (0.0..=1.0).contains(&p))));
        assert_eq!(parse_mnist(&img, &lbl, Some(2)).unwrap().len(), 2);
    }

    #[test]
    fn rejects_bad_files() {
        let (img, lbl) = synthetic(2, 0x0000_0802, LABEL_MAGIC);
        assert!(parse_mnist(&img, &lbl, None).is_err());
        let (img, lbl) = synthetic(2, IMAGE_MAGIC, 0x0000_0803);
        assert!(parse_mnist(&img, &lbl, None).is_err());
        let (mut img, lbl) = synthetic(2, IMAGE_MAGIC, LABEL_MAGIC);
        img.truncate(img.len() - 1);
        assert!(parse_mnist(&img, &lbl, None).is_err());
        let (img, _) = synthetic(2, IMAGE_MAGIC, LABEL_MAGIC);
        let (_, lbl) = synthetic(3, IMAGE_MAGIC, LABEL_MAGIC);
        assert!(parse_mnist(&img, &lbl, None).is_err());
        assert!(parse_mnist(&[0, 0], &lbl, None).is_err());
    }

    #[test]
    fn sha_of_empty_input() {
        assert_eq!(
            sha256_hex(b""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }
}
