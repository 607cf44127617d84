#![allow(clippy::needless_range_loop)]

mod common;

use common::{dense_adjacency, naive_ccns, naive_cos, naive_histograms, naive_two_ncs, random_fixture};
use hetgraph_core::graph::permute;
use hetgraph_core::metrics::{self, CcnsReduction};
use hetgraph_core::synth::{build_fig2, build_planted_partition, planted_partition_expected_homophily, PlantedPartitionSpec};
use hetgraph_core::LabelSet;
use proptest::prelude::*;

#[test]
fn two_ncs_matches_naive_bitwise() {
    for seed in 0..60 {
        let f = random_fixture(seed, 40, 5);
        let adj = dense_adjacency(&f.graph);
        let all = metrics::two_ncs_all(&f.graph, &f.labels).unwrap();
        for u in 0..f.graph.node_count() {
            let expect = naive_two_ncs(&adj, &f.labels, u);
            let single = metrics::two_ncs_node(&f.graph, &f.labels, u).ok();
            assert_eq!(single.map(f64::to_bits), expect.map(f64::to_bits), "seed {seed} node {u}");
            assert_eq!(all[u].map(f64::to_bits), expect.map(f64::to_bits), "seed {seed} node {u}");
        }
    }
}

#[test]
fn masked_two_ncs_matches_naive() {
    for seed in 0..40 {
        let f = random_fixture(500 + seed, 40, 4);
        let n = f.graph.node_count();
        let visible: Vec<usize> = (0..n).filter(|u| !(u * 7 + seed as usize).is_multiple_of(3)).collect();
        let labels = f.labels.clone().with_visible_nodes(&visible).unwrap();
        let adj = dense_adjacency(&f.graph);
        let all = metrics::two_ncs_all(&f.graph, &labels).unwrap();
        for u in 0..n {
            let expect = naive_two_ncs(&adj, &labels, u);
            assert_eq!(all[u].map(f64::to_bits), expect.map(f64::to_bits), "seed {seed} node {u}");
        }
    }
}

#[test]
fn ccns_matches_naive_bitwise() {
    for seed in 0..60 {
        let f = random_fixture(2000 + seed, 40, 5);
        let adj = dense_adjacency(&f.graph);
        let m = metrics::ccns_matrix(&f.graph, &f.labels).unwrap();
        let expect = naive_ccns(&adj, &f.labels);
        for (c, row) in expect.iter().enumerate() {
            for (d, &e) in row.iter().enumerate() {
                assert_eq!(m.get(c, d).to_bits(), e.to_bits(), "seed {seed} ({c},{d})");
                assert_eq!(m.get(c, d), m.get(d, c));
                assert!((0.0..=1.0).contains(&m.get(c, d)));
            }
        }
    }
}

#[test]
fn fig2_histograms_and_ccns() {
    let ds = build_fig2();
    let (g, l) = (&ds.graph, &ds.labels);
    let red = ds.class_index("red").unwrap();
    let orange = ds.class_index("orange").unwrap();
    let green = ds.class_index("green").unwrap();
    let h0 = metrics::label_histogram(g, l, 0).unwrap().counts;
    assert_eq!((h0[red], h0[orange], h0[green]), (0, 8, 0));
    let h9 = metrics::label_histogram(g, l, 9).unwrap().counts;
    assert_eq!((h9[red], h9[orange], h9[green]), (0, 8, 32));

    // s(red, red) by explicit 25 x 25 enumeration.
    let adj = dense_adjacency(g);
    let hist = naive_histograms(&adj, l);
    let reds: Vec<usize> = (0..g.node_count()).filter(|&u| l.class_of(u) == red).collect();
    assert_eq!(reds.len(), 25);
    let mut sum = 0.0;
    for &u in &reds {
        for &v in &reds {
            sum += naive_cos(&hist[u], &hist[v]);
        }
    }
    let m = metrics::ccns_matrix(g, l).unwrap();
    assert!((m.get(red, red) - sum / 625.0).abs() < 1e-15);

    // node 0 against 24 peers that all have histogram (0, 8, 32)
    let expect = 64.0 / (8.0 * 1088f64.sqrt());
    assert!((metrics::ccns_node(g, l, 0).unwrap() - expect).abs() < 1e-15);
    assert_eq!(metrics::local_homophily(g, l, 0).unwrap(), 0.0);
    let two = metrics::two_ncs_node(g, l, 0).unwrap();
    assert!((two - 8.0 * 0.96 / 9.0).abs() < 1e-15);
}

#[test]
fn metrics_stay_in_unit_interval() {
    for seed in 0..30 {
        let f = random_fixture(3000 + seed, 35, 4);
        let nm = metrics::node_metrics(&f.graph, &f.labels).unwrap();
        for col in [&nm.local_h, &nm.ccns, &nm.two_ncs] {
            for v in col.iter().flatten() {
                assert!((0.0..=1.0).contains(v), "seed {seed}: {v}");
            }
        }
        if let Ok(h) = metrics::edge_homophily(&f.graph, &f.labels) {
            assert!((0.0..=1.0).contains(&h));
            let cross = f
                .graph
                .edges()
                .filter(|&(u, v)| f.labels.class_of(u) != f.labels.class_of(v))
                .count() as f64
                / f.graph.edge_count() as f64;
            assert!((h - (1.0 - cross)).abs() < 1e-15);
        }
    }
}

#[test]
fn node_metrics_permute_covariantly() {
    for seed in 0..10 {
        let f = random_fixture(4000 + seed, 30, 3);
        let perm = common::random_permutation(f.graph.node_count(), seed);
        let (pg, pl) = permute(&f.graph, &f.labels, &perm).unwrap();
        let a = metrics::node_metrics(&f.graph, &f.labels).unwrap();
        let b = metrics::node_metrics(&pg, &pl).unwrap();
        for u in 0..f.graph.node_count() {
            let p = perm[u];
            assert_eq!(a.local_h[u], b.local_h[p]);
            // 2NCS terms are integer ratios visited in a different order.
            match (a.two_ncs[u], b.two_ncs[p]) {
                (Some(x), Some(y)) => assert!((x - y).abs() < 1e-12),
                (x, y) => assert_eq!(x, y),
            }
            match (a.ccns[u], b.ccns[p]) {
                (Some(x), Some(y)) => assert!((x - y).abs() < 1e-12),
                (x, y) => assert_eq!(x, y),
            }
        }
    }
}

#[test]
fn per_class_two_ncs_is_class_mean() {
    let f = random_fixture(77, 40, 3);
    let all = metrics::two_ncs_all(&f.graph, &f.labels).unwrap();
    let per = metrics::two_ncs_per_class(&f.graph, &f.labels, None).unwrap();
    for (c, entry) in per.iter().enumerate() {
        let vals: Vec<f64> = (0..f.graph.node_count())
            .filter(|&u| f.labels.class_of(u) == c)
            .filter_map(|u| all[u])
            .collect();
        match entry {
            Some(a) => {
                assert!((a.value - vals.iter().sum::<f64>() / vals.len() as f64).abs() < 1e-15);
                assert_eq!(a.value, metrics::two_ncs_class(&f.graph, &f.labels, c, None).unwrap().value);
            }
            None => assert!(vals.is_empty()),
        }
    }
}

#[test]
fn monochrome_component_class_scores_one() {
    // class 0 forms its own clique; class 1 is a separate path.
    let g = hetgraph_core::Graph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5)]).unwrap();
    let l = LabelSet::new(vec![0, 0, 0, 1, 1, 1], 2).unwrap();
    assert_eq!(metrics::two_ncs_class(&g, &l, 0, None).unwrap().value, 1.0);
    assert_eq!(metrics::two_ncs_graph(&g, &l, None).unwrap().value, 1.0);
    assert_eq!(metrics::ccns_graph(&g, &l, CcnsReduction::DiagMean).unwrap(), 1.0);
}

#[test]
fn planted_partition_homophily() {
    let ds = build_planted_partition(&PlantedPartitionSpec {
        sizes: vec![50, 50],
        p_in: 0.5,
        p_out: 0.05,
        seed: 42,
    })
    .unwrap();
    let h = metrics::edge_homophily(&ds.graph, &ds.labels).unwrap();
    assert!(h > 0.7, "{h}");

    // Larger graphs approach the ratio of expected counts.
    let sizes = vec![300, 300, 300];
    let expect = planted_partition_expected_homophily(&sizes, 0.05, 0.01);
    let ds = build_planted_partition(&PlantedPartitionSpec {
        sizes,
        p_in: 0.05,
        p_out: 0.01,
        seed: 5,
    })
    .unwrap();
    let h = metrics::edge_homophily(&ds.graph, &ds.labels).unwrap();
    assert!((h - expect).abs() < 0.03, "{h} vs {expect}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn full_mask_equals_unmasked(seed in 0u64..10_000) {
        let f = random_fixture(seed, 25, 4);
        let all: Vec<usize> = (0..f.graph.node_count()).collect();
        let masked = f.labels.clone().with_visible_nodes(&all).unwrap();
        prop_assert_eq!(
            metrics::two_ncs_all(&f.graph, &f.labels).unwrap(),
            metrics::two_ncs_all(&f.graph, &masked).unwrap()
        );
    }
}
