use proptest::prelude::*;
use spikeonet::encoding::{
    float_decode, float_encode, latency_encode, lower_triangle_encode, rate_decode, rate_encode,
};
use spikeonet::{FloatPrecision, IntervalGrid};

#[test]
fn float32_pattern_of_minus_25_0313() {
    let bits = float_encode(-25.0313, FloatPrecision::Single).unwrap();
    let text: String = bits.iter().map(|b| char::from(b'0' + b)).collect();
    assert_eq!(text, "11000001110010000100000000011010");
    let back = float_decode(&bits).unwrap();
    assert_eq!(back, f64::from(-25.0313_f32));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn double_roundtrip_is_exact(x in any::<f64>().prop_filter("finite", |v| v.is_finite())) {
        let bits = float_encode(x, FloatPrecision::Double).unwrap();
        prop_assert_eq!(bits.len(), 64);
        prop_assert_eq!(float_decode(&bits).unwrap().to_bits(), x.to_bits());
    }

    #[test]
    fn single_roundtrip_is_exact(x in any::<f32>().prop_filter("finite", |v| v.is_finite())) {
        let bits = float_encode(f64::from(x), FloatPrecision::Single).unwrap();
        prop_assert_eq!(bits.len(), 32);
        prop_assert_eq!(float_decode(&bits).unwrap(), f64::from(x));
    }
}

proptest! {
    #[test]
    fn lower_triangle_counts(n in 2usize..40, m in 1usize..6) {
        let grid = IntervalGrid::new(0.0, 1.0, n).unwrap();
        let train = lower_triangle_encode(&grid, m * n).unwrap();
        for k in 0..n {
            prop_assert_eq!(train.spike_times(k).len(), m * (k + 1));
        }
    }

    #[test]
    fn latency_fires_once(values in prop::collection::vec(0.0f64..=1.0, 1..50), n_t in 1usize..64) {
        let train = latency_encode(&values, n_t).unwrap();
        for k in 0..values.len() {
            prop_assert_eq!(train.spike_times(k).len(), 1);
        }
    }

    #[test]
    fn rate_decode_concentrates(v in 0.0f64..=1.0, seed in any::<u64>()) {
        // Hoeffding with failure probability 1e-9 per case
        let n_t = 4000;
        let eps = ((2.0f64 / 1e-9).ln() / (2.0 * n_t as f64)).sqrt();
        let p = rate_decode(&rate_encode(&[v], n_t, seed).unwrap())[0];
        prop_assert!((p - v).abs() <= eps, "{p} vs {v}");
    }
}
