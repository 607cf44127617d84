#![allow(clippy::needless_range_loop)]

mod common;

use common::{dense_adjacency, desk_fixtures, finite_difference_gradient, random_fixture, random_fixture_with, relative_error};
use hetgraph_core::sgcn::{self, DenseMatrix, Init, TrainConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_weights(n: usize, c: usize, seed: u64) -> DenseMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data = (0..n * c).map(|_| rng.gen_range(-1.0..1.0)).collect();
    DenseMatrix::from_vec(n, c, data).unwrap()
}

#[test]
fn gradient_matches_central_differences() {
    let mut worst = 0.0f64;
    for seed in 0..20 {
        let f = random_fixture(7000 + seed, 20, 4);
        let (n, c) = (f.graph.node_count(), f.labels.num_classes());
        let w = random_weights(n, c, seed);
        let batch: Vec<usize> = (0..n).filter(|u| (u + seed as usize).is_multiple_of(2)).collect();
        let grad = sgcn::gradient(&f.graph, &w, &f.labels, &batch).unwrap();
        let rows: Vec<Vec<f64>> = (0..n).map(|u| w.row(u).to_vec()).collect();
        let fd = finite_difference_gradient(&dense_adjacency(&f.graph), &rows, f.labels.classes(), &batch, 1e-5);
        for u in 0..n {
            for k in 0..c {
                let e = relative_error(grad.get(u, k), fd[u][k]);
                worst = worst.max(e);
                assert!(e < 1e-5, "seed {seed} entry ({u},{k}): {} vs {}", grad.get(u, k), fd[u][k]);
            }
        }
    }
    println!("worst relative error {worst:e}");
}

#[test]
fn gradient_rows_vanish_exactly_outside_batch_reach() {
    for seed in 0..20 {
        // With a single class every softmax is 1 and the gradient vanishes everywhere.
        let f = random_fixture_with(8000 + seed, 20, 2, 4);
        let n = f.graph.node_count();
        let w = random_weights(n, f.labels.num_classes(), seed);
        let batch: Vec<usize> = (0..n).filter(|u| u % 3 == 0).collect();
        let grad = sgcn::gradient(&f.graph, &w, &f.labels, &batch).unwrap();
        for v in 0..n {
            let reached = f.graph.closed_iter(v).any(|z| batch.contains(&z));
            let zero = grad.row(v).iter().all(|&x| x == 0.0);
            assert_eq!(!reached, zero, "seed {seed} node {v}");
        }
    }
}

#[test]
fn forward_rows_are_distributions() {
    for (name, f) in desk_fixtures() {
        let w = random_weights(f.graph.node_count(), f.labels.num_classes(), 1);
        let h = sgcn::forward(&f.graph, &w).unwrap();
        for u in 0..h.rows() {
            let s: f64 = h.row(u).iter().sum();
            assert!((s - 1.0).abs() < 1e-9, "{name} row {u}");
            assert!(h.row(u).iter().all(|&p| p > 0.0));
        }
    }
}

#[test]
fn full_batch_loss_is_monotone_at_small_step() {
    for (name, f) in desk_fixtures() {
        let all: Vec<usize> = (0..f.graph.node_count()).collect();
        let cfg = TrainConfig {
            learning_rate: 0.01,
            epochs: 100,
            ..Default::default()
        };
        let (_, hist) = sgcn::train(&f.graph, &f.labels, &all, None, &cfg).unwrap();
        let mut prev = hist.initial_loss;
        for &l in &hist.loss {
            assert!(l <= prev, "{name}: {l} > {prev}");
            prev = l;
        }
        let (_, default_hist) = sgcn::train(&f.graph, &f.labels, &all, None, &TrainConfig::default()).unwrap();
        assert!(default_hist.loss.last().unwrap() < &default_hist.initial_loss, "{name}");
    }
}

#[test]
fn training_is_deterministic() {
    let f = random_fixture(99, 30, 3);
    let nodes: Vec<usize> = (0..f.graph.node_count()).step_by(2).collect();
    let labels = f.labels.clone().with_visible_nodes(&nodes).unwrap();
    let cfg = TrainConfig {
        batch_size: Some(3),
        seed: 17,
        init: Init::Uniform { scale: 0.01 },
        epochs: 30,
        ..Default::default()
    };
    let (w1, h1) = sgcn::train(&f.graph, &labels, &nodes, None, &cfg).unwrap();
    let (w2, h2) = sgcn::train(&f.graph, &labels, &nodes, None, &cfg).unwrap();
    assert_eq!(w1, w2);
    assert_eq!(h1, h2);
    let (w3, _) = sgcn::train(&f.graph, &labels, &nodes, None, &TrainConfig { seed: 18, ..cfg }).unwrap();
    assert_ne!(w1, w3);
}

#[test]
fn training_rejects_hidden_or_empty_train_set() {
    let f = random_fixture(5, 10, 2);
    let hidden = f.labels.clone().with_visible_nodes(&[0]).unwrap();
    assert!(sgcn::train(&f.graph, &hidden, &[0, 1], None, &TrainConfig::default()).is_err());
    assert!(sgcn::train(&f.graph, &f.labels, &[], None, &TrainConfig::default()).is_err());
}

#[test]
fn validation_accuracy_is_tracked() {
    let f = random_fixture(6, 30, 3);
    let n = f.graph.node_count();
    let train: Vec<usize> = (0..n / 2).collect();
    let val: Vec<usize> = (n / 2..n).collect();
    let cfg = TrainConfig { epochs: 5, ..Default::default() };
    let (_, hist) = sgcn::train(&f.graph, &f.labels, &train, Some(&val), &cfg).unwrap();
    assert_eq!(hist.val_accuracy.unwrap().len(), 5);
    assert_eq!(hist.loss.len(), 5);
}
