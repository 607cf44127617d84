//! Test-only oracles and fixtures. Everything here works on dense adjacency
//! matrices and plain loops, independent of the CSR code paths.

#![allow(dead_code, clippy::needless_range_loop)]

use hetgraph_core::{Graph, LabelSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Fixture {
    pub graph: Graph,
    pub labels: LabelSet,
}

/// Erdos-Renyi style graph with random labels.
pub fn random_fixture(seed: u64, max_n: usize, max_classes: usize) -> Fixture {
    random_fixture_with(seed, max_n, 1, max_classes)
}

pub fn random_fixture_with(seed: u64, max_n: usize, min_classes: usize, max_classes: usize) -> Fixture {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(2..=max_n);
    let k = rng.gen_range(min_classes..=max_classes);
    let p: f64 = rng.gen_range(0.02..0.5);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    let y = (0..n).map(|_| rng.gen_range(0..k)).collect();
    Fixture {
        graph: Graph::from_edges(n, &edges).unwrap(),
        labels: LabelSet::new(y, k).unwrap(),
    }
}

pub fn random_permutation(n: usize, seed: u64) -> Vec<usize> {
    use rand::seq::SliceRandom;
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    p
}

pub fn dense_adjacency(g: &Graph) -> Vec<Vec<bool>> {
    let n = g.node_count();
    let mut a = vec![vec![false; n]; n];
    for (u, v) in g.edges() {
        a[u][v] = true;
        a[v][u] = true;
    }
    a
}

/// Direct transcription of the 2NCS formula: for each v in N'(u), the share
/// of visible z in N'(v) \ {u} with y_z = y_u; terms with no visible z are
/// skipped. Scans z over 0..n for every v.
pub fn naive_two_ncs(adj: &[Vec<bool>], labels: &LabelSet, u: usize) -> Option<f64> {
    let n = adj.len();
    let y = labels.classes();
    let mut sum = 0.0;
    let mut terms = 0usize;
    for v in 0..n {
        if !(v == u || adj[u][v]) {
            continue;
        }
        let mut same = 0u32;
        let mut seen = 0u32;
        for z in 0..n {
            if (z == v || adj[v][z]) && z != u && labels.is_visible(z) {
                seen += 1;
                if y[z] == y[u] {
                    same += 1;
                }
            }
        }
        if seen > 0 {
            sum += f64::from(same) / f64::from(seen);
            terms += 1;
        }
    }
    (terms > 0).then(|| sum / terms as f64)
}

pub fn naive_histograms(adj: &[Vec<bool>], labels: &LabelSet) -> Vec<Vec<u32>> {
    let n = adj.len();
    (0..n)
        .map(|u| {
            let mut h = vec![0u32; labels.num_classes()];
            for v in 0..n {
                if adj[u][v] && labels.is_visible(v) {
                    h[labels.class_of(v)] += 1;
                }
            }
            h
        })
        .collect()
}

/// Cosine with the zero-vector convention, `dot / sqrt(|a|^2 |b|^2)`.
pub fn naive_cos(a: &[u32], b: &[u32]) -> f64 {
    let dot: u64 = a.iter().zip(b).map(|(&x, &y)| u64::from(x) * u64::from(y)).sum();
    let na: u64 = a.iter().map(|&x| u64::from(x) * u64::from(x)).sum();
    let nb: u64 = b.iter().map(|&x| u64::from(x) * u64::from(x)).sum();
    if na == 0 || nb == 0 {
        0.0
    } else {
        dot as f64 / ((na as f64) * (nb as f64)).sqrt()
    }
}

/// Double sum over all (u, v) in V_c x V_d, u then v ascending, for c <= d.
pub fn naive_ccns(adj: &[Vec<bool>], labels: &LabelSet) -> Vec<Vec<f64>> {
    let n = adj.len();
    let k = labels.num_classes();
    let hist = naive_histograms(adj, labels);
    let y = labels.classes();
    let mut s = vec![vec![0.0; k]; k];
    for c in 0..k {
        for d in c..k {
            let mut sum = 0.0;
            let mut nc = 0usize;
            let mut nd = 0usize;
            for u in 0..n {
                if y[u] == c {
                    nc += 1;
                }
                if y[u] == d {
                    nd += 1;
                }
            }
            if nc == 0 || nd == 0 {
                continue;
            }
            for u in 0..n {
                if y[u] != c {
                    continue;
                }
                for v in 0..n {
                    if y[v] == d {
                        sum += naive_cos(&hist[u], &hist[v]);
                    }
                }
            }
            s[c][d] = sum / (nc as f64 * nd as f64);
            s[d][c] = s[c][d];
        }
    }
    s
}

/// Mean batch cross-entropy of softmax((A + I) W), evaluated densely.
pub fn dense_loss(adj: &[Vec<bool>], w: &[Vec<f64>], y: &[usize], batch: &[usize]) -> f64 {
    let n = adj.len();
    let c = w[0].len();
    let mut total = 0.0;
    for &z in batch {
        let mut logits = vec![0.0; c];
        for v in 0..n {
            if v == z || adj[z][v] {
                for k in 0..c {
                    logits[k] += w[v][k];
                }
            }
        }
        let max = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lse = max + logits.iter().map(|l| (l - max).exp()).sum::<f64>().ln();
        total += lse - logits[y[z]];
    }
    total / batch.len() as f64
}

/// Central differences of `dense_loss` with step `h`.
pub fn finite_difference_gradient(
    adj: &[Vec<bool>],
    w: &[Vec<f64>],
    y: &[usize],
    batch: &[usize],
    h: f64,
) -> Vec<Vec<f64>> {
    let mut w = w.to_vec();
    let mut out = vec![vec![0.0; w[0].len()]; w.len()];
    for v in 0..w.len() {
        for k in 0..w[0].len() {
            let orig = w[v][k];
            w[v][k] = orig + h;
            let up = dense_loss(adj, &w, y, batch);
            w[v][k] = orig - h;
            let down = dense_loss(adj, &w, y, batch);
            w[v][k] = orig;
            out[v][k] = (up - down) / (2.0 * h);
        }
    }
    out
}

pub fn relative_error(a: f64, b: f64) -> f64 {
    let denom = a.abs().max(b.abs());
    if denom == 0.0 {
        0.0
    } else {
        (a - b).abs() / denom
    }
}

/// Small named fixtures used by property checks.
pub fn desk_fixtures() -> Vec<(&'static str, Fixture)> {
    let fig2 = hetgraph_core::synth::build_fig2();
    let path = Fixture {
        graph: Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap(),
        labels: LabelSet::new(vec![0, 0, 1], 2).unwrap(),
    };
    // Two-class label space so the loss is not identically zero.
    let triangle = Fixture {
        graph: Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap(),
        labels: LabelSet::new(vec![0, 0, 0], 2).unwrap(),
    };
    let pp = hetgraph_core::synth::build_planted_partition(&hetgraph_core::synth::PlantedPartitionSpec {
        sizes: vec![20, 20, 20],
        p_in: 0.3,
        p_out: 0.05,
        seed: 3,
    })
    .unwrap();
    let mut out = vec![
        (
            "fig2",
            Fixture {
                graph: fig2.graph,
                labels: fig2.labels,
            },
        ),
        ("path", path),
        ("triangle", triangle),
        (
            "planted",
            Fixture {
                graph: pp.graph,
                labels: pp.labels,
            },
        ),
    ];
    for seed in 0..4 {
        out.push(("random", random_fixture_with(1000 + seed, 30, 2, 4)));
    }
    out
}
