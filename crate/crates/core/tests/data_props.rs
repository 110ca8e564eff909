use std::f64::consts::PI;
use std::path::PathBuf;

use proptest::prelude::*;
use spikeonet::data::{load_mnist_split, poisson_solve_1d, resolve_mnist_dir, verify_mnist_dir};
use spikeonet::mlp_membrane::mnist_membrane_dataset;
use spikeonet::{IntervalGrid, LifConfig};

fn max_error(n: usize, a: f64, k: f64) -> f64 {
    let grid = IntervalGrid::new(0.0, 1.0, n).unwrap();
    let xs = grid.points();
    let f: Vec<f64> = xs.iter().map(|x| -a * (k * PI).powi(2) * (k * PI * x).sin()).collect();
    let u = poisson_solve_1d(&f, &grid).unwrap();
    xs.iter()
        .zip(&u)
        .map(|(x, u)| (u - a * (k * PI * x).sin()).abs())
        .fold(0.0, f64::max)
}

proptest! {
    #[test]
    fn poisson_converges_at_second_order(a in 0.1f64..5.0, k in 1u32..4) {
        let k = f64::from(k);
        let e: Vec<f64> = [41, 81, 161].iter().map(|&n| max_error(n, a, k)).collect();
        for pair in e.windows(2) {
            let ratio = pair[0] / pair[1];
            prop_assert!((3.6..4.4).contains(&ratio), "ratio {ratio} from {e:?}");
        }
    }

    #[test]
    fn constant_forcing_is_exact(n in 3usize..300, a in -2.0f64..0.0, b in 0.5f64..3.0) {
        let grid = IntervalGrid::new(a, b, n).unwrap();
        let u = poisson_solve_1d(&vec![2.0; n], &grid).unwrap();
        for (x, u) in grid.points().iter().zip(&u) {
            prop_assert!((u - (x - a) * (x - b)).abs() < 1e-9);
        }
    }
}

fn mnist_dir() -> Option<PathBuf> {
    let local = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/mnist");
    resolve_mnist_dir(None).or_else(|| resolve_mnist_dir(Some(&local)))
}

#[test]
fn real_mnist_files_load() {
    let Some(dir) = mnist_dir() else {
        eprintln!("MNIST files not present, skipping");
        return;
    };
    verify_mnist_dir(&dir).unwrap();
    let train = load_mnist_split(&dir, true, None).unwrap();
    let test = load_mnist_split(&dir, false, None).unwrap();
    assert_eq!(train.len(), 60_000);
    assert_eq!(test.len(), 10_000);
    let mut seen = [false; 10];
    for r in &train {
        seen[usize::from(r.label)] = true;
        assert_eq!(r.pixels.len(), 784);
        assert!(r.pixels.iter().all(|p| (0.0..=1.0).contains(p)));
    }
    assert!(seen.iter().all(|&s| s));
}

#[test]
fn mnist_membrane_targets_have_moderate_activity() {
    let Some(dir) = mnist_dir() else {
        eprintln!("MNIST files not present, skipping");
        return;
    };
    let records = load_mnist_split(&dir, true, Some(20)).unwrap();
    let lif = LifConfig {
        v_thresh: 1.5,
        ..LifConfig::default()
    };
    let ds = mnist_membrane_dataset(&records, 40, 0, &lif, 50).unwrap();
    let frac = ds.target_spike_fraction();
    assert!((0.01..=0.60).contains(&frac), "{frac}");
}
