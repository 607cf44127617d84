//! Synthetic datasets: the fixed 113-node counterexample and seeded
//! planted-partition graphs.

use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::Dataset;

pub const FIG2_NODES: usize = 113;
pub const FIG2_EDGES: usize = 1480;

/// The 113-node counterexample in which node 0 has zero local homophily and
/// low CCNS, yet its 2-hop neighborhood is dominated by its own class.
///
/// Layout:
/// * red: 0, 9..=20, 21..=32
/// * orange: 1..=8, 97..=104, 105..=112
/// * green: 33..=64, 65..=96
///
/// Each "densely connected" pair of groups is a complete bipartite block:
/// 1..=8 with {0} ∪ 9..=32, 33..=64 with 9..=20 ∪ 97..=104, and 65..=96 with
/// 21..=32 ∪ 105..=112. There are no other edges.
pub fn build_fig2() -> Dataset {
    fn connect(edges: &mut Vec<(usize, usize)>, a: &[RangeInclusive<usize>], b: &[RangeInclusive<usize>]) {
        for ra in a {
            for u in ra.clone() {
                for rb in b {
                    for v in rb.clone() {
                        edges.push((u, v));
                    }
                }
            }
        }
    }

    let mut edges = Vec::with_capacity(FIG2_EDGES);
    connect(&mut edges, &[1..=8], &[0..=0, 9..=32]);
    connect(&mut edges, &[33..=64], &[9..=20, 97..=104]);
    connect(&mut edges, &[65..=96], &[21..=32, 105..=112]);

    let labels: Vec<&str> = (0..FIG2_NODES)
        .map(|u| match u {
            0 | 9..=32 => "red",
            1..=8 | 97..=112 => "orange",
            _ => "green",
        })
        .collect();
    Dataset::from_string_labels(FIG2_NODES, &edges, &labels).expect("fixed layout is valid")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlantedPartitionSpec {
    pub sizes: Vec<usize>,
    pub p_in: f64,
    pub p_out: f64,
    pub seed: u64,
}

/// Independent Bernoulli edge per unordered pair: `p_in` within a class,
/// `p_out` across classes. Pairs are drawn in `(u, v)`, `u < v` order.
///
/// Class `i` covers a contiguous node block and is named `c<i>` (zero-padded
/// so lexicographic order equals block order).
pub fn build_planted_partition(spec: &PlantedPartitionSpec) -> Result<Dataset> {
    for (name, p) in [("p_in", spec.p_in), ("p_out", spec.p_out)] {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::input(format!("{name} = {p} is not a probability")));
        }
    }
    if spec.sizes.is_empty() || spec.sizes.contains(&0) {
        return Err(Error::input("class sizes must be nonempty and positive"));
    }
    let width = (spec.sizes.len() - 1).to_string().len();
    let block: Vec<usize> = spec
        .sizes
        .iter()
        .enumerate()
        .flat_map(|(c, &s)| std::iter::repeat_n(c, s))
        .collect();
    let n = block.len();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let p = if block[u] == block[v] { spec.p_in } else { spec.p_out };
            if rng.gen::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    let names: Vec<String> = block.iter().map(|c| format!("c{c:0width$}")).collect();
    Dataset::from_string_labels(n, &edges, &names)
}

/// Expected edge homophily of a planted partition (ratio of expected counts).
pub fn planted_partition_expected_homophily(sizes: &[usize], p_in: f64, p_out: f64) -> f64 {
    let n: usize = sizes.iter().sum();
    let intra: f64 = sizes.iter().map(|&s| (s * s.saturating_sub(1) / 2) as f64).sum();
    let total = (n * n.saturating_sub(1) / 2) as f64;
    let within = intra * p_in;
    within / (within + (total - intra) * p_out)
}
