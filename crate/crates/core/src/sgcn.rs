//! Simplified one-layer GCN, `H = softmax((A + I) W)`, with identity node
//! features and an un-normalized adjacency.
//!
//! Row `u` of `W` is node `u`'s class-evidence vector before aggregation; row
//! `u` of `H` is the softmax of the sum of `W_v` over the closed neighborhood
//! `N'(u)`. `A + I` is never materialized.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, LabelSet};

const LOG_CLAMP: f64 = 1e-12;

/// Row-major real matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

/// `n x |C|` weights of the simplified GCN.
pub type WeightMatrix = DenseMatrix;

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::input("matrix rows have different lengths"));
        }
        Ok(DenseMatrix {
            rows: rows.len(),
            cols,
            data: rows.concat(),
        })
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::input(format!(
                "{} values cannot fill a {rows} x {cols} matrix",
                data.len()
            )));
        }
        Ok(DenseMatrix { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, r: usize) -> &mut [f64] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] = v;
    }

    /// One row per line, values separated by single spaces.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in 0..self.rows {
            let line: Vec<String> = self.row(r).iter().map(|x| format!("{x:e}")).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let rows = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .enumerate()
            .map(|(i, l)| {
                l.split_whitespace()
                    .map(|v| {
                        v.parse::<f64>()
                            .map_err(|_| Error::input(format!("matrix row {i}: invalid number {v:?}")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(&rows)
    }
}

/// In-place numerically stable softmax.
pub fn softmax_in_place(z: &mut [f64]) {
    let max = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut sum = 0.0;
    for x in z.iter_mut() {
        *x = (*x - max).exp();
        sum += *x;
    }
    for x in z.iter_mut() {
        *x /= sum;
    }
}

fn aggregate_into(g: &Graph, w: &DenseMatrix, u: usize, out: &mut [f64]) {
    out.iter_mut().for_each(|x| *x = 0.0);
    for v in g.closed_iter(u) {
        for (o, x) in out.iter_mut().zip(w.row(v)) {
            *o += x;
        }
    }
}

fn check_weights(g: &Graph, w: &DenseMatrix) -> Result<()> {
    if w.rows() != g.node_count() {
        return Err(Error::input(format!(
            "weight matrix has {} rows but graph has {} nodes",
            w.rows(),
            g.node_count()
        )));
    }
    if w.cols() == 0 {
        return Err(Error::input("weight matrix has no class columns"));
    }
    Ok(())
}

/// `H_u = softmax(Σ_{v ∈ N'(u)} W_v)` for every node.
pub fn forward(g: &Graph, w: &WeightMatrix) -> Result<DenseMatrix> {
    check_weights(g, w)?;
    let c = w.cols();
    let mut h = DenseMatrix::zeros(g.node_count(), c);
    h.data.par_chunks_mut(c).enumerate().for_each(|(u, row)| {
        aggregate_into(g, w, u, row);
        softmax_in_place(row);
    });
    Ok(h)
}

fn check_batch(labels: &LabelSet, batch: &[usize], n: usize) -> Result<()> {
    if batch.is_empty() {
        return Err(Error::input("empty batch"));
    }
    for &z in batch {
        if z >= n {
            return Err(Error::input(format!("batch node {z} out of range (n={n})")));
        }
        if !labels.is_visible(z) {
            return Err(Error::input(format!("batch node {z} has a hidden label")));
        }
    }
    Ok(())
}

/// Mean of `-ln H[z, y_z]` over the batch, with the probability clamped at 1e-12.
pub fn cross_entropy(h: &DenseMatrix, labels: &LabelSet, batch: &[usize]) -> Result<f64> {
    check_batch(labels, batch, h.rows())?;
    if labels.len() != h.rows() || labels.num_classes() != h.cols() {
        return Err(Error::input("label set does not match probability matrix"));
    }
    let sum: f64 = batch
        .iter()
        .map(|&z| -h.get(z, labels.class_of(z)).max(LOG_CLAMP).ln())
        .sum();
    Ok(sum / batch.len() as f64)
}

/// Gradient of the mean batch cross-entropy with respect to `W`.
///
/// `G_v = (1/|B|) Σ_{z ∈ B, v ∈ N'(z)} (H_z - onehot(y_z))`; rows of nodes
/// outside every `N'(z)` are exactly zero.
pub fn gradient(g: &Graph, w: &WeightMatrix, labels: &LabelSet, batch: &[usize]) -> Result<DenseMatrix> {
    check_weights(g, w)?;
    check_batch(labels, batch, g.node_count())?;
    if labels.len() != g.node_count() || labels.num_classes() != w.cols() {
        return Err(Error::input("label set does not match weight matrix"));
    }
    let c = w.cols();
    let scale = 1.0 / batch.len() as f64;
    let mut grad = DenseMatrix::zeros(g.node_count(), c);
    let mut delta = vec![0.0; c];
    for &z in batch {
        aggregate_into(g, w, z, &mut delta);
        softmax_in_place(&mut delta);
        delta[labels.class_of(z)] -= 1.0;
        for v in g.closed_iter(z) {
            for (gv, d) in grad.row_mut(v).iter_mut().zip(&delta) {
                *gv += d;
            }
        }
    }
    grad.data.iter_mut().for_each(|x| *x *= scale);
    Ok(grad)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Init {
    Zeros,
    /// Independent uniform draws in `[-scale, scale]`.
    Uniform { scale: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub epochs: usize,
    /// `None` means full batch.
    pub batch_size: Option<usize>,
    pub seed: u64,
    pub init: Init,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            learning_rate: 0.1,
            epochs: 200,
            batch_size: None,
            seed: 0,
            init: Init::Zeros,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::input(format!(
                "learning rate must be positive, got {}",
                self.learning_rate
            )));
        }
        if self.epochs == 0 {
            return Err(Error::input("epochs must be at least 1"));
        }
        if self.batch_size == Some(0) {
            return Err(Error::input("batch size must be at least 1"));
        }
        if let Init::Uniform { scale } = self.init {
            if !(scale >= 0.0 && scale.is_finite()) {
                return Err(Error::input(format!("invalid init scale {scale}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainHistory {
    /// Training loss before the first update.
    pub initial_loss: f64,
    /// Training loss after each epoch.
    pub loss: Vec<f64>,
    pub train_accuracy: Vec<f64>,
    pub val_accuracy: Option<Vec<f64>>,
}

fn init_weights(n: usize, c: usize, cfg: &TrainConfig, rng: &mut ChaCha8Rng) -> DenseMatrix {
    let mut w = DenseMatrix::zeros(n, c);
    if let Init::Uniform { scale } = cfg.init {
        for x in w.data.iter_mut() {
            *x = rng.gen_range(-scale..=scale);
        }
    }
    w
}

/// Plain gradient descent on the training nodes. Each epoch shuffles the
/// training nodes with the seeded generator, cuts them into batches and
/// applies `W <- W - lr * gradient` per batch.
pub fn train(
    g: &Graph,
    labels: &LabelSet,
    train_nodes: &[usize],
    val_nodes: Option<&[usize]>,
    cfg: &TrainConfig,
) -> Result<(WeightMatrix, TrainHistory)> {
    cfg.validate()?;
    labels.check_against(g)?;
    check_batch(labels, train_nodes, g.node_count())?;
    if let Some(val) = val_nodes {
        if let Some(&u) = val.iter().find(|&&u| u >= g.node_count()) {
            return Err(Error::input(format!("validation node {u} out of range")));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut w = init_weights(g.node_count(), labels.num_classes(), cfg, &mut rng);
    let batch_size = cfg.batch_size.unwrap_or(train_nodes.len()).min(train_nodes.len());

    let initial_loss = cross_entropy(&forward(g, &w)?, labels, train_nodes)?;
    let mut history = TrainHistory {
        initial_loss,
        loss: Vec::with_capacity(cfg.epochs),
        train_accuracy: Vec::with_capacity(cfg.epochs),
        val_accuracy: val_nodes.filter(|v| !v.is_empty()).map(|_| Vec::with_capacity(cfg.epochs)),
    };

    let mut order = train_nodes.to_vec();
    for _ in 0..cfg.epochs {
        order.shuffle(&mut rng);
        for chunk in order.chunks(batch_size) {
            let mut batch = chunk.to_vec();
            batch.sort_unstable();
            let grad = gradient(g, &w, labels, &batch)?;
            for (x, d) in w.data.iter_mut().zip(&grad.data) {
                *x -= cfg.learning_rate * d;
            }
        }
        let h = forward(g, &w)?;
        let pred = argmax_rows(&h);
        history.loss.push(cross_entropy(&h, labels, train_nodes)?);
        history.train_accuracy.push(accuracy(&pred, labels, train_nodes)?);
        if let (Some(acc), Some(val)) = (history.val_accuracy.as_mut(), val_nodes) {
            acc.push(accuracy(&pred, labels, val)?);
        }
    }
    Ok((w, history))
}

fn argmax_rows(h: &DenseMatrix) -> Vec<usize> {
    (0..h.rows())
        .map(|u| {
            let row = h.row(u);
            let mut best = 0;
            for (c, &p) in row.iter().enumerate().skip(1) {
                if p > row[best] {
                    best = c;
                }
            }
            best
        })
        .collect()
}

/// Most probable class per node; ties go to the smallest class index.
pub fn predict(g: &Graph, w: &WeightMatrix) -> Result<Vec<usize>> {
    Ok(argmax_rows(&forward(g, w)?))
}

/// Share of `subset` whose prediction matches the true class. Ignores the mask.
pub fn accuracy(pred: &[usize], labels: &LabelSet, subset: &[usize]) -> Result<f64> {
    if subset.is_empty() {
        return Err(Error::input("accuracy over an empty subset"));
    }
    if pred.len() != labels.len() {
        return Err(Error::input("prediction and label lengths differ"));
    }
    let mut hits = 0usize;
    for &u in subset {
        if u >= pred.len() {
            return Err(Error::input(format!("node {u} out of range")));
        }
        hits += usize::from(pred[u] == labels.class_of(u));
    }
    Ok(hits as f64 / subset.len() as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LooOutcome {
    pub node: usize,
    pub predicted: usize,
    pub correct: bool,
    pub history: TrainHistory,
}

/// Trains on every node except `u` (whose label is hidden but which stays in
/// the graph) and predicts `u`.
pub fn leave_one_out(g: &Graph, labels: &LabelSet, u: usize, cfg: &TrainConfig) -> Result<LooOutcome> {
    labels.check_against(g)?;
    g.check_node(u)?;
    if g.node_count() < 2 {
        return Err(Error::input("leave-one-out needs at least two nodes"));
    }
    let train_nodes: Vec<usize> = (0..g.node_count())
        .filter(|&v| v != u && labels.is_visible(v))
        .collect();
    let visible: Vec<bool> = (0..g.node_count()).map(|v| v != u && labels.is_visible(v)).collect();
    let masked = labels.clone().with_mask(visible)?;
    let (w, history) = train(g, &masked, &train_nodes, None, cfg)?;
    let predicted = predict(g, &w)?[u];
    Ok(LooOutcome {
        node: u,
        predicted,
        correct: predicted == labels.class_of(u),
        history,
    })
}
