use proptest::prelude::*;
use qudit_discriminator::cli::{round_value, sig15, OutputRecord};
use qudit_discriminator::harness::random_unitary;
use qudit_discriminator::linalg::{self, C64};
use qudit_discriminator::optics::{prepare_state_network, reck_decompose, Interferometer, TwoModeLayer};
use qudit_discriminator::spaces::SpaceSpec;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reck_round_trip(n in 1usize..=8, seed in any::<u64>()) {
        let u = random_unitary(n, seed).unwrap();
        let net = reck_decompose(&u).unwrap();
        prop_assert!(net.layers().len() <= n * (n - 1) / 2);
        prop_assert!(linalg::max_abs_diff(&net.unitary(), &u) < 1e-10);
        prop_assert!(net.unitarity_defect() < 1e-10);
    }

    #[test]
    fn compose_then_decompose(layers in prop::collection::vec((0usize..5, 1usize..5, -3.0f64..3.0, -3.0f64..3.0, -3.0f64..3.0), 0..12)) {
        let mut net = Interferometer::new(5).unwrap();
        for (a, off, w, p, t) in layers {
            net.push(TwoModeLayer::new(a, (a + off) % 5, w, p, t).unwrap()).unwrap();
        }
        let u = net.unitary();
        prop_assert!(linalg::unitarity_defect(&u) < 1e-10);
        let again = reck_decompose(&u).unwrap();
        prop_assert!(linalg::max_abs_diff(&again.unitary(), &u) < 1e-10);
        prop_assert_eq!(Interferometer::from_text(&net.to_text()).unwrap(), net);
    }

    #[test]
    fn state_preparation_column(raw in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..8)) {
        let norm = raw.iter().map(|(a, b)| a * a + b * b).sum::<f64>().sqrt();
        prop_assume!(norm > 1e-3);
        let amps: Vec<C64> = raw.iter().map(|&(a, b)| C64::new(a / norm, b / norm)).collect();
        let net = prepare_state_network(&amps).unwrap();
        let col = net.unitary().column(0).into_owned();
        for (x, y) in col.iter().zip(&amps) {
            prop_assert!((x - y).norm() < 1e-10);
        }
    }

    #[test]
    fn sig15_is_idempotent_and_close(x in prop::num::f64::NORMAL) {
        let r = sig15(x);
        prop_assert_eq!(sig15(r), r);
        prop_assert!(((r - x) / x).abs() <= 5e-15);
    }

    #[test]
    fn records_round_trip(vals in prop::collection::vec(-1e6f64..1e6, 0..6), seed in any::<u64>()) {
        let rec = OutputRecord::new("scan", serde_json::json!({ "v": vals }), serde_json::json!({ "w": vals }), Some(seed));
        let text = rec.to_json();
        let back: OutputRecord = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(&back, &rec);
        prop_assert_eq!(round_value(back.results.clone()), back.results);
    }

    #[test]
    fn flatten_round_trip(n in 1usize..6, factors in 1usize..=3, seed in any::<usize>()) {
        let sp = SpaceSpec::new(n, factors).unwrap();
        let idx = seed % sp.dim();
        prop_assert_eq!(sp.flatten(&sp.unflatten(idx)).unwrap(), idx);
    }
}
