use proptest::prelude::*;
use spikeonet::metrics::{l2_error, savgol_smooth, savgol_weights, time_per_sample};
use spikeonet::EvalReport;

#[test]
fn window_five_quadratic_kernel() {
    let w = savgol_weights(5, 2, 2).unwrap();
    let expected = [-3.0, 12.0, 17.0, 12.0, -3.0].map(|v| v / 35.0);
    for (a, b) in w.iter().zip(expected) {
        assert!((a - b).abs() < 1e-12);
    }
}

fn signal(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-10.0f64..10.0, len)
}

proptest! {
    #[test]
    fn savgol_reproduces_cubics(c in prop::array::uniform4(-3.0f64..3.0), n in 60usize..200) {
        let xs: Vec<f64> = (0..n).map(|i| i as f64 / n as f64).collect();
        let y: Vec<f64> = xs.iter().map(|x| c[0] + c[1] * x + c[2] * x * x + c[3] * x * x * x).collect();
        let s = savgol_smooth(&y, 51, 3).unwrap();
        for (a, b) in s.iter().zip(&y) {
            prop_assert!((a - b).abs() < 1e-8);
        }
    }

    #[test]
    fn savgol_is_linear(x in signal(80), y in signal(80), a in -2.0f64..2.0, b in -2.0f64..2.0) {
        let mix: Vec<f64> = x.iter().zip(&y).map(|(x, y)| a * x + b * y).collect();
        let sx = savgol_smooth(&x, 21, 3).unwrap();
        let sy = savgol_smooth(&y, 21, 3).unwrap();
        let sm = savgol_smooth(&mix, 21, 3).unwrap();
        for i in 0..80 {
            prop_assert!((sm[i] - (a * sx[i] + b * sy[i])).abs() < 1e-9);
        }
    }

    #[test]
    fn l2_is_symmetric_and_zero_on_equal(x in signal(30), y in signal(30)) {
        prop_assert_eq!(l2_error(&x, &y).unwrap(), l2_error(&y, &x).unwrap());
        prop_assert_eq!(l2_error(&x, &x).unwrap(), 0.0);
        let direct: f64 = x.iter().zip(&y).map(|(a, b)| (a - b) * (a - b)).sum();
        prop_assert!((l2_error(&x, &y).unwrap() - direct).abs() <= 1e-12 * direct.max(1.0));
    }

    #[test]
    fn report_statistics_recompute(errors in prop::collection::vec(0.0f64..100.0, 1..60)) {
        let r = EvalReport::from_errors(errors.clone(), None).unwrap();
        let n = errors.len() as f64;
        let mean = errors.iter().sum::<f64>() / n;
        let var = errors.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / n;
        let mut sorted = errors.clone();
        sorted.sort_by(f64::total_cmp);
        let m = sorted.len();
        let median = if m % 2 == 1 { sorted[m / 2] } else { 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]) };
        prop_assert!((r.mean - mean).abs() < 1e-9);
        prop_assert!((r.std - var.sqrt()).abs() < 1e-9);
        prop_assert_eq!(r.median, median);
    }
}

#[test]
fn per_sample_time_does_not_grow_with_batch() {
    let work = |_: &u32| std::thread::sleep(std::time::Duration::from_millis(2));
    let small = time_per_sample(work, &[0u32; 4], 5).unwrap();
    let large = time_per_sample(work, &[0u32; 8], 5).unwrap();
    assert!(small >= 2.0 && large >= 2.0);
    assert!(large < 2.0 * small && small < 2.0 * large, "{small} vs {large}");
}
