use hetgraph_core::analysis::{correlate_node_metric, pearson_r, per_class_accuracy, CorrelationMethod};
use hetgraph_core::sgcn::accuracy;
use hetgraph_core::LabelSet;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn series() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (3usize..30).prop_flat_map(|n| {
        (
            prop::collection::vec(-100.0f64..100.0, n),
            prop::collection::vec(-100.0f64..100.0, n),
        )
    })
}

proptest! {
    #[test]
    fn pearson_symmetry_affine_and_sign((xs, ys) in series(), a in 0.1f64..10.0, b in -50.0f64..50.0) {
        let Ok(r) = pearson_r(&xs, &ys) else { return Ok(()); };
        prop_assert!((-1.0..=1.0).contains(&r));
        prop_assert!((pearson_r(&ys, &xs).unwrap() - r).abs() < 1e-12);
        let scaled: Vec<f64> = xs.iter().map(|x| a * x + b).collect();
        prop_assert!((pearson_r(&scaled, &ys).unwrap() - r).abs() < 1e-9);
        let neg: Vec<f64> = ys.iter().map(|y| -y).collect();
        prop_assert!((pearson_r(&xs, &neg).unwrap() + r).abs() < 1e-12);
    }

    #[test]
    fn point_biserial_is_pearson_of_indicator(
        metric in prop::collection::vec(0.0f64..1.0, 4..40),
        seed in any::<u64>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let correct: Vec<bool> = metric.iter().map(|_| rng.gen()).collect();
        let ys: Vec<f64> = correct.iter().map(|&c| if c { 1.0 } else { 0.0 }).collect();
        let wrapped: Vec<Option<f64>> = metric.iter().copied().map(Some).collect();
        match (pearson_r(&metric, &ys), correlate_node_metric(&wrapped, &correct, CorrelationMethod::PointBiserial)) {
            (Ok(r), Ok(c)) => prop_assert_eq!(r, c.r),
            (Err(_), Err(_)) => {}
            (a, b) => prop_assert!(false, "{:?} vs {:?}", a, b),
        }
    }

    #[test]
    fn per_class_accuracy_weights_to_overall(
        y in prop::collection::vec(0usize..4, 1..60),
        seed in any::<u64>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pred: Vec<usize> = y.iter().map(|&c| if rng.gen_bool(0.6) { c } else { rng.gen_range(0..4) }).collect();
        let labels = LabelSet::new(y.clone(), 4).unwrap();
        let per = per_class_accuracy(&pred, &labels, None).unwrap();
        let sizes = labels.class_sizes();
        let weighted: f64 = per.iter().zip(&sizes).filter_map(|(a, &s)| a.map(|a| a * s as f64)).sum::<f64>() / y.len() as f64;
        let all: Vec<usize> = (0..y.len()).collect();
        prop_assert!((weighted - accuracy(&pred, &labels, &all).unwrap()).abs() < 1e-12);
    }
}

#[test]
fn independent_correctness_has_small_correlation() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let metric: Vec<Option<f64>> = (0..2000).map(|_| Some(rng.gen::<f64>())).collect();
    let correct: Vec<bool> = (0..2000).map(|_| rng.gen_bool(0.5)).collect();
    let c = correlate_node_metric(&metric, &correct, CorrelationMethod::PointBiserial).unwrap();
    assert!(c.r.abs() < 0.2, "{}", c.r);
}

#[test]
fn binned_correlation_tracks_rising_accuracy() {
    // P(correct) = metric, so per-bin accuracy rises with the bin midpoint.
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let metric: Vec<f64> = (0..5000).map(|_| rng.gen::<f64>()).collect();
    let correct: Vec<bool> = metric.iter().map(|&m| rng.gen::<f64>() < m).collect();
    let wrapped: Vec<Option<f64>> = metric.into_iter().map(Some).collect();
    let c = correlate_node_metric(&wrapped, &correct, CorrelationMethod::Binned { bins: 10 }).unwrap();
    assert_eq!(c.bins.len(), 10);
    assert!(c.r > 0.9, "{}", c.r);
    assert_eq!(c.bins.iter().map(|b| b.count).sum::<usize>(), 5000);
}

#[test]
fn dropped_nodes_are_counted() {
    let metric = [Some(0.1), None, Some(0.9), None, Some(0.5)];
    let correct = [false, true, true, false, true];
    let c = correlate_node_metric(&metric, &correct, CorrelationMethod::PointBiserial).unwrap();
    assert_eq!(c.used + c.dropped, metric.len());
    assert_eq!(c.dropped, 2);
}
