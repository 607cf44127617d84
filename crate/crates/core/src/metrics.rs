//! Label-structure metrics: edge and local homophily, cross-class neighborhood
//! similarity (CCNS) and 2-hop neighbor class similarity (2NCS).
//!
//! Every metric honours the visibility mask carried by [`LabelSet`]: hidden
//! labels are left out of histograms and 2NCS counts. Edge homophily always
//! uses every label.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, LabelSet};

/// Fraction of undirected edges whose endpoints share a class.
pub fn edge_homophily(g: &Graph, labels: &LabelSet) -> Result<f64> {
    labels.check_against(g)?;
    let m = g.edge_count();
    if m == 0 {
        return Err(Error::undefined("edge homophily of a graph without edges"));
    }
    let same = g
        .edges()
        .filter(|&(u, v)| labels.class_of(u) == labels.class_of(v))
        .count();
    Ok(same as f64 / m as f64)
}

/// Fraction of `u`'s neighbors that share its class.
pub fn local_homophily(g: &Graph, labels: &LabelSet, u: usize) -> Result<f64> {
    labels.check_against(g)?;
    let nbrs = g.neighbors(u)?;
    if nbrs.is_empty() {
        return Err(Error::undefined(format!("local homophily of isolated node {u}")));
    }
    let y = labels.class_of(u);
    let same = nbrs.iter().filter(|&&v| labels.class_of(v) == y).count();
    Ok(same as f64 / nbrs.len() as f64)
}

/// Counts of visible neighbor labels, one entry per class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelHistogram {
    pub counts: Vec<u32>,
}

impl LabelHistogram {
    pub fn total(&self) -> u32 {
        self.counts.iter().sum()
    }

    pub fn cosine(&self, other: &LabelHistogram) -> f64 {
        cosine_counts(&self.counts, &other.counts)
    }
}

pub fn label_histogram(g: &Graph, labels: &LabelSet, u: usize) -> Result<LabelHistogram> {
    labels.check_against(g)?;
    g.check_node(u)?;
    let mut counts = vec![0u32; labels.num_classes()];
    fill_histogram(g, labels, u, &mut counts);
    Ok(LabelHistogram { counts })
}

fn fill_histogram(g: &Graph, labels: &LabelSet, u: usize, counts: &mut [u32]) {
    for &v in g.adj(u) {
        if labels.is_visible(v) {
            counts[labels.class_of(v)] += 1;
        }
    }
}

/// Cosine similarity of two count vectors; 0 when either is all-zero.
///
/// The dot product and squared norms are exact integers, and the square root
/// of their product is correctly rounded, so the result never exceeds 1.
pub fn cosine_counts(a: &[u32], b: &[u32]) -> f64 {
    let mut dot = 0u64;
    let mut na = 0u64;
    let mut nb = 0u64;
    for (&x, &y) in a.iter().zip(b) {
        let (x, y) = (u64::from(x), u64::from(y));
        dot += x * y;
        na += x * x;
        nb += y * y;
    }
    if na == 0 || nb == 0 {
        return 0.0;
    }
    dot as f64 / ((na as f64) * (nb as f64)).sqrt()
}

/// All neighbor histograms, row-major `n x |C|`.
#[derive(Debug, Clone)]
pub struct Histograms {
    classes: usize,
    counts: Vec<u32>,
}

impl Histograms {
    pub fn compute(g: &Graph, labels: &LabelSet) -> Result<Self> {
        labels.check_against(g)?;
        let c = labels.num_classes();
        let mut counts = vec![0u32; g.node_count() * c];
        counts
            .par_chunks_mut(c.max(1))
            .enumerate()
            .for_each(|(u, row)| fill_histogram(g, labels, u, row));
        Ok(Histograms { classes: c, counts })
    }

    #[inline]
    pub fn row(&self, u: usize) -> &[u32] {
        &self.counts[u * self.classes..(u + 1) * self.classes]
    }
}

/// Symmetric `|C| x |C|` matrix of mean pairwise neighborhood cosine similarity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CcnsMatrix {
    pub num_classes: usize,
    /// Row-major entries.
    pub s: Vec<f64>,
    /// Class sizes `|V_c|`.
    pub class_sizes: Vec<usize>,
    /// Classes with no members; their rows and columns are zero.
    pub empty_classes: Vec<usize>,
}

impl CcnsMatrix {
    pub fn get(&self, c: usize, d: usize) -> f64 {
        self.s[c * self.num_classes + d]
    }

    pub fn from_entries(s: Vec<Vec<f64>>, class_sizes: Vec<usize>) -> Self {
        let num_classes = s.len();
        let empty_classes = class_sizes
            .iter()
            .enumerate()
            .filter(|(_, &k)| k == 0)
            .map(|(c, _)| c)
            .collect();
        CcnsMatrix {
            num_classes,
            s: s.into_iter().flatten().collect(),
            class_sizes,
            empty_classes,
        }
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.s
            .chunks(self.num_classes.max(1))
            .map(<[f64]>::to_vec)
            .collect()
    }

    /// Collapses the matrix to one number. Empty classes are skipped.
    pub fn reduce(&self, reduction: CcnsReduction) -> f64 {
        let present: Vec<usize> = (0..self.num_classes)
            .filter(|&c| self.class_sizes[c] > 0)
            .collect();
        if present.is_empty() {
            return 0.0;
        }
        match reduction {
            CcnsReduction::DiagMean => {
                present.iter().map(|&c| self.get(c, c)).sum::<f64>() / present.len() as f64
            }
            CcnsReduction::FullMean => {
                let mut sum = 0.0;
                for &c in &present {
                    for &d in &present {
                        sum += self.get(c, d);
                    }
                }
                sum / (present.len() * present.len()) as f64
            }
            CcnsReduction::WeightedDiag => {
                let n: usize = self.class_sizes.iter().sum();
                present
                    .iter()
                    .map(|&c| self.class_sizes[c] as f64 * self.get(c, c))
                    .sum::<f64>()
                    / n as f64
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CcnsReduction {
    /// Unweighted mean of the diagonal.
    DiagMean,
    /// Mean of every entry.
    FullMean,
    /// Diagonal weighted by class size.
    WeightedDiag,
}

impl CcnsReduction {
    pub const ALL: [CcnsReduction; 3] = [
        CcnsReduction::DiagMean,
        CcnsReduction::FullMean,
        CcnsReduction::WeightedDiag,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CcnsReduction::DiagMean => "diag_mean",
            CcnsReduction::FullMean => "full_mean",
            CcnsReduction::WeightedDiag => "weighted_diag",
        }
    }
}

impl std::str::FromStr for CcnsReduction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CcnsReduction::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| Error::input(format!("unknown CCNS reduction {s:?}")))
    }
}

/// Mean cosine similarity of neighbor histograms over every ordered pair
/// `(u, v)` with `u` in class `c` and `v` in class `c'`, `u = v` included.
///
/// Each unordered class pair is summed once, `u` then `v` ascending, and
/// mirrored.
pub fn ccns_matrix(g: &Graph, labels: &LabelSet) -> Result<CcnsMatrix> {
    let hist = Histograms::compute(g, labels)?;
    let members = labels.members();
    let k = labels.num_classes();
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|c| (c..k).map(move |d| (c, d))).collect();
    let values: Vec<f64> = pairs
        .par_iter()
        .map(|&(c, d)| {
            let (a, b) = (&members[c], &members[d]);
            if a.is_empty() || b.is_empty() {
                return 0.0;
            }
            let mut sum = 0.0;
            for &u in a {
                let hu = hist.row(u);
                for &v in b {
                    sum += cosine_counts(hu, hist.row(v));
                }
            }
            sum / (a.len() as f64 * b.len() as f64)
        })
        .collect();
    let mut s = vec![0.0; k * k];
    for (&(c, d), &val) in pairs.iter().zip(&values) {
        s[c * k + d] = val;
        s[d * k + c] = val;
    }
    let class_sizes: Vec<usize> = members.iter().map(Vec::len).collect();
    let empty_classes = (0..k).filter(|&c| class_sizes[c] == 0).collect();
    Ok(CcnsMatrix {
        num_classes: k,
        s,
        class_sizes,
        empty_classes,
    })
}

pub fn ccns_graph(g: &Graph, labels: &LabelSet, reduction: CcnsReduction) -> Result<f64> {
    Ok(ccns_matrix(g, labels)?.reduce(reduction))
}

/// Mean cosine similarity between `u`'s neighbor histogram and that of every
/// other member of its class.
pub fn ccns_node(g: &Graph, labels: &LabelSet, u: usize) -> Result<f64> {
    let hu = label_histogram(g, labels, u)?;
    let y = labels.class_of(u);
    let mut hv = vec![0u32; labels.num_classes()];
    let mut sum = 0.0;
    let mut count = 0usize;
    for v in (0..g.node_count()).filter(|&v| v != u && labels.class_of(v) == y) {
        hv.iter_mut().for_each(|x| *x = 0);
        fill_histogram(g, labels, v, &mut hv);
        sum += cosine_counts(&hu.counts, &hv);
        count += 1;
    }
    if count == 0 {
        return Err(Error::undefined(format!("CCNS of node {u}: its class has no other member")));
    }
    Ok(sum / count as f64)
}

fn ccns_node_with(hist: &Histograms, members: &[Vec<usize>], labels: &LabelSet, u: usize) -> Option<f64> {
    let peers = &members[labels.class_of(u)];
    if peers.len() < 2 {
        return None;
    }
    let hu = hist.row(u);
    let sum: f64 = peers
        .iter()
        .filter(|&&v| v != u)
        .map(|&v| cosine_counts(hu, hist.row(v)))
        .sum();
    Some(sum / (peers.len() - 1) as f64)
}

/// 2NCS of node `u`: over `v` in `N'(u)`, the share of visible nodes in
/// `N'(v) \ {u}` labelled like `u`, averaged over the terms whose visible
/// denominator is nonzero. `y_u` is the reference even if `u` is hidden.
pub fn two_ncs_node(g: &Graph, labels: &LabelSet, u: usize) -> Result<f64> {
    labels.check_against(g)?;
    g.check_node(u)?;
    let y = labels.class_of(u);
    two_ncs_terms(g, u, |v| {
        let mut same = 0u32;
        let mut seen = 0u32;
        for z in g.closed_iter(v) {
            if z != u && labels.is_visible(z) {
                seen += 1;
                if labels.class_of(z) == y {
                    same += 1;
                }
            }
        }
        (same, seen)
    })
    .ok_or_else(|| Error::undefined(format!("2NCS of node {u}: no visible 2-hop neighbors")))
}

fn two_ncs_terms(g: &Graph, u: usize, mut counts: impl FnMut(usize) -> (u32, u32)) -> Option<f64> {
    let mut sum = 0.0;
    let mut terms = 0usize;
    for v in g.closed_iter(u) {
        let (same, seen) = counts(v);
        if seen > 0 {
            sum += f64::from(same) / f64::from(seen);
            terms += 1;
        }
    }
    (terms > 0).then(|| sum / terms as f64)
}

/// Per-node visible class counts over closed neighborhoods, for computing
/// 2NCS of every node in `O(|E| + n |C|)`.
#[derive(Debug, Clone)]
pub struct ClosedCounts {
    classes: usize,
    per_class: Vec<u32>,
    visible: Vec<u32>,
}

impl ClosedCounts {
    pub fn compute(g: &Graph, labels: &LabelSet) -> Result<Self> {
        labels.check_against(g)?;
        let c = labels.num_classes();
        let mut per_class = vec![0u32; g.node_count() * c];
        let visible: Vec<u32> = per_class
            .par_chunks_mut(c.max(1))
            .enumerate()
            .map(|(v, row)| {
                let mut seen = 0;
                for z in g.closed_iter(v) {
                    if labels.is_visible(z) {
                        row[labels.class_of(z)] += 1;
                        seen += 1;
                    }
                }
                seen
            })
            .collect();
        Ok(ClosedCounts {
            classes: c,
            per_class,
            visible,
        })
    }

    /// Same value as [`two_ncs_node`], bit for bit.
    pub fn two_ncs(&self, g: &Graph, labels: &LabelSet, u: usize) -> Option<f64> {
        let y = labels.class_of(u);
        // u lies in N'(v) for every v in N'(u); remove it from both counts.
        let own = u32::from(labels.is_visible(u));
        two_ncs_terms(g, u, |v| {
            (
                self.per_class[v * self.classes + y] - own,
                self.visible[v] - own,
            )
        })
    }
}

/// Mean of defined node-level values plus bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Averaged {
    pub value: f64,
    /// Nodes that contributed.
    pub used: usize,
    /// Nodes in the subset whose node-level value was undefined.
    pub undefined: usize,
}

fn average(values: impl Iterator<Item = Option<f64>>, what: &str) -> Result<Averaged> {
    let mut sum = 0.0;
    let mut used = 0;
    let mut undefined = 0;
    for v in values {
        match v {
            Some(x) => {
                sum += x;
                used += 1;
            }
            None => undefined += 1,
        }
    }
    if used == 0 {
        return Err(Error::undefined(format!("{what}: no node has a defined value")));
    }
    Ok(Averaged {
        value: sum / used as f64,
        used,
        undefined,
    })
}

/// Nodes whose label is visible, i.e. every node when no mask is set.
pub fn labeled_nodes(labels: &LabelSet) -> Vec<usize> {
    (0..labels.len()).filter(|&u| labels.is_visible(u)).collect()
}

/// 2NCS of every node, `None` where undefined.
pub fn two_ncs_all(g: &Graph, labels: &LabelSet) -> Result<Vec<Option<f64>>> {
    let counts = ClosedCounts::compute(g, labels)?;
    Ok((0..g.node_count())
        .into_par_iter()
        .map(|u| counts.two_ncs(g, labels, u))
        .collect())
}

/// Graph-level 2NCS: mean over `subset`, defaulting to the labeled nodes.
pub fn two_ncs_graph(g: &Graph, labels: &LabelSet, subset: Option<&[usize]>) -> Result<Averaged> {
    let owned;
    let subset = match subset {
        Some(s) => s,
        None => {
            owned = labeled_nodes(labels);
            &owned
        }
    };
    if subset.is_empty() {
        return Err(Error::input("2NCS over an empty node subset"));
    }
    for &u in subset {
        g.check_node(u)?;
    }
    let counts = ClosedCounts::compute(g, labels)?;
    let values: Vec<Option<f64>> = subset
        .par_iter()
        .map(|&u| counts.two_ncs(g, labels, u))
        .collect();
    average(values.into_iter(), "graph-level 2NCS")
}

/// Mean 2NCS over members of class `c` that lie in `subset` (default: labeled nodes).
pub fn two_ncs_class(
    g: &Graph,
    labels: &LabelSet,
    c: usize,
    subset: Option<&[usize]>,
) -> Result<Averaged> {
    if c >= labels.num_classes() {
        return Err(Error::input(format!(
            "class {c} out of range ({} classes)",
            labels.num_classes()
        )));
    }
    let members = class_subset(labels, c, subset);
    if members.is_empty() {
        return Err(Error::input(format!("class {c} has no nodes in the subset")));
    }
    two_ncs_graph(g, labels, Some(&members))
}

fn class_subset(labels: &LabelSet, c: usize, subset: Option<&[usize]>) -> Vec<usize> {
    match subset {
        Some(s) => s.iter().copied().filter(|&u| labels.class_of(u) == c).collect(),
        None => (0..labels.len())
            .filter(|&u| labels.is_visible(u) && labels.class_of(u) == c)
            .collect(),
    }
}

/// Node-level table: local homophily, CCNS and 2NCS, `None` where undefined.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeMetrics {
    pub local_h: Vec<Option<f64>>,
    pub ccns: Vec<Option<f64>>,
    pub two_ncs: Vec<Option<f64>>,
}

pub fn node_metrics(g: &Graph, labels: &LabelSet) -> Result<NodeMetrics> {
    labels.check_against(g)?;
    let hist = Histograms::compute(g, labels)?;
    let members = labels.members();
    let counts = ClosedCounts::compute(g, labels)?;
    let rows: Vec<(Option<f64>, Option<f64>, Option<f64>)> = (0..g.node_count())
        .into_par_iter()
        .map(|u| {
            (
                local_homophily(g, labels, u).ok(),
                ccns_node_with(&hist, &members, labels, u),
                counts.two_ncs(g, labels, u),
            )
        })
        .collect();
    let mut out = NodeMetrics {
        local_h: Vec::with_capacity(rows.len()),
        ccns: Vec::with_capacity(rows.len()),
        two_ncs: Vec::with_capacity(rows.len()),
    };
    for (h, c, t) in rows {
        out.local_h.push(h);
        out.ccns.push(c);
        out.two_ncs.push(t);
    }
    Ok(out)
}

/// Per-class 2NCS for every class; `None` for classes with no nodes in the subset.
pub fn two_ncs_per_class(
    g: &Graph,
    labels: &LabelSet,
    subset: Option<&[usize]>,
) -> Result<Vec<Option<Averaged>>> {
    let counts = ClosedCounts::compute(g, labels)?;
    (0..labels.num_classes())
        .map(|c| {
            let members = class_subset(labels, c, subset);
            if members.is_empty() {
                return Ok(None);
            }
            let vals = members.iter().map(|&u| counts.two_ncs(g, labels, u));
            match average(vals, "per-class 2NCS") {
                Ok(a) => Ok(Some(a)),
                Err(Error::Undefined(_)) => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect()
}
