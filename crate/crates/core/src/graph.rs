//! Undirected simple graph in compressed sparse row form, plus node labels.
//!
//! `row_offsets[u]..row_offsets[u + 1]` indexes the ascending neighbor list of
//! `u` inside `neighbor_ids`. Every undirected edge is stored twice, once per
//! direction, so `row_offsets[n] == 2 * m`.

use std::collections::HashSet;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    row_offsets: Vec<usize>,
    neighbor_ids: Vec<usize>,
}

/// Bookkeeping produced while normalizing a raw pair list into a [`Graph`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BuildStats {
    /// Pairs as given, including duplicates and self-loops.
    pub raw_pairs: usize,
    pub self_loops: usize,
    /// Distinct directed pairs `(u, v)`, `u != v`, whose reverse was not supplied.
    pub asymmetric_pairs: usize,
    /// Undirected edges after symmetrizing and deduplicating.
    pub edges: usize,
}

impl Graph {
    /// Symmetrizes, deduplicates and strips self-loops.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        Self::from_edges_with_stats(n, edges).map(|(g, _)| g)
    }

    pub fn from_edges_with_stats(n: usize, edges: &[(usize, usize)]) -> Result<(Self, BuildStats)> {
        let mut stats = BuildStats {
            raw_pairs: edges.len(),
            ..BuildStats::default()
        };
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut directed = HashSet::with_capacity(edges.len());
        for (i, &(u, v)) in edges.iter().enumerate() {
            if u >= n || v >= n {
                return Err(Error::input(format!(
                    "edge #{i} ({u}, {v}) has an endpoint outside [0, {n})"
                )));
            }
            if u == v {
                stats.self_loops += 1;
                continue;
            }
            directed.insert((u, v));
            adj[u].push(v);
            adj[v].push(u);
        }
        stats.asymmetric_pairs = directed
            .iter()
            .filter(|&&(u, v)| !directed.contains(&(v, u)))
            .count();

        let mut row_offsets = Vec::with_capacity(n + 1);
        let mut neighbor_ids = Vec::new();
        row_offsets.push(0);
        for row in &mut adj {
            row.sort_unstable();
            row.dedup();
            neighbor_ids.extend_from_slice(row);
            row_offsets.push(neighbor_ids.len());
        }
        let g = Graph {
            row_offsets,
            neighbor_ids,
        };
        stats.edges = g.edge_count();
        Ok((g, stats))
    }

    pub fn node_count(&self) -> usize {
        self.row_offsets.len() - 1
    }

    /// Number of undirected edges, each counted once.
    pub fn edge_count(&self) -> usize {
        self.neighbor_ids.len() / 2
    }

    pub fn row_offsets(&self) -> &[usize] {
        &self.row_offsets
    }

    pub fn neighbor_ids(&self) -> &[usize] {
        &self.neighbor_ids
    }

    /// Ascending neighbors of `u`. Panics if `u` is out of range; use
    /// [`Graph::neighbors`] for a checked variant.
    #[inline]
    pub fn adj(&self, u: usize) -> &[usize] {
        &self.neighbor_ids[self.row_offsets[u]..self.row_offsets[u + 1]]
    }

    #[inline]
    pub fn degree(&self, u: usize) -> usize {
        self.row_offsets[u + 1] - self.row_offsets[u]
    }

    pub fn neighbors(&self, u: usize) -> Result<&[usize]> {
        self.check_node(u)?;
        Ok(self.adj(u))
    }

    /// `N(u) ∪ {u}` in ascending order.
    pub fn closed_neighborhood(&self, u: usize) -> Result<Vec<usize>> {
        self.check_node(u)?;
        Ok(self.closed_iter(u).collect())
    }

    /// Iterates `N(u) ∪ {u}` in ascending order without allocating.
    pub fn closed_iter(&self, u: usize) -> ClosedNeighbors<'_> {
        ClosedNeighbors {
            rest: self.adj(u),
            center: Some(u),
        }
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.node_count() && self.adj(u).binary_search(&v).is_ok()
    }

    /// Each undirected edge once, as `(u, v)` with `u < v`, in row order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.node_count()).flat_map(move |u| {
            self.adj(u)
                .iter()
                .filter(move |&&v| v > u)
                .map(move |&v| (u, v))
        })
    }

    pub fn check_node(&self, u: usize) -> Result<()> {
        if u < self.node_count() {
            Ok(())
        } else {
            Err(Error::input(format!(
                "node {u} out of range (graph has {} nodes)",
                self.node_count()
            )))
        }
    }
}

pub struct ClosedNeighbors<'a> {
    rest: &'a [usize],
    center: Option<usize>,
}

impl Iterator for ClosedNeighbors<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        match (self.rest.split_first(), self.center) {
            (Some((&v, tail)), Some(c)) if v < c => {
                self.rest = tail;
                Some(v)
            }
            (_, Some(c)) => {
                self.center = None;
                Some(c)
            }
            (Some((&v, tail)), None) => {
                self.rest = tail;
                Some(v)
            }
            (None, None) => None,
        }
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.rest.len() + usize::from(self.center.is_some());
        (n, Some(n))
    }
}

impl ExactSizeIterator for ClosedNeighbors<'_> {}

/// Per-node class assignments with an optional visibility mask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelSet {
    y: Vec<usize>,
    num_classes: usize,
    known: Option<Vec<bool>>,
}

impl LabelSet {
    pub fn new(y: Vec<usize>, num_classes: usize) -> Result<Self> {
        if num_classes == 0 {
            return Err(Error::input("num_classes must be at least 1"));
        }
        if let Some((u, &c)) = y.iter().enumerate().find(|(_, &c)| c >= num_classes) {
            return Err(Error::input(format!(
                "node {u} has class {c}, outside [0, {num_classes})"
            )));
        }
        Ok(LabelSet {
            y,
            num_classes,
            known: None,
        })
    }

    pub fn with_mask(mut self, known: Vec<bool>) -> Result<Self> {
        if known.len() != self.y.len() {
            return Err(Error::input(format!(
                "mask has length {}, expected {}",
                known.len(),
                self.y.len()
            )));
        }
        self.known = Some(known);
        Ok(self)
    }

    /// Mask in which exactly `visible` nodes are known.
    pub fn with_visible_nodes(self, visible: &[usize]) -> Result<Self> {
        let mut known = vec![false; self.y.len()];
        for &u in visible {
            if u >= known.len() {
                return Err(Error::input(format!(
                    "masked node {u} out of range (graph has {} nodes)",
                    known.len()
                )));
            }
            known[u] = true;
        }
        self.with_mask(known)
    }

    pub fn without_mask(mut self) -> Self {
        self.known = None;
        self
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn classes(&self) -> &[usize] {
        &self.y
    }

    pub fn mask(&self) -> Option<&[bool]> {
        self.known.as_deref()
    }

    #[inline]
    pub fn class_of(&self, u: usize) -> usize {
        self.y[u]
    }

    #[inline]
    pub fn is_visible(&self, u: usize) -> bool {
        self.known.as_ref().is_none_or(|k| k[u])
    }

    /// Ascending member list for each class.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_classes];
        for (u, &c) in self.y.iter().enumerate() {
            out[c].push(u);
        }
        out
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        let mut out = vec![0; self.num_classes];
        for &c in &self.y {
            out[c] += 1;
        }
        out
    }

    pub(crate) fn check_against(&self, g: &Graph) -> Result<()> {
        if self.y.len() != g.node_count() {
            return Err(Error::input(format!(
                "label set covers {} nodes but graph has {}",
                self.y.len(),
                g.node_count()
            )));
        }
        Ok(())
    }
}

/// Renames node `u` to `perm[u]` in both the graph and the labels.
pub fn permute(g: &Graph, labels: &LabelSet, perm: &[usize]) -> Result<(Graph, LabelSet)> {
    let n = g.node_count();
    labels.check_against(g)?;
    if perm.len() != n {
        return Err(Error::input(format!(
            "permutation has length {}, expected {n}",
            perm.len()
        )));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return Err(Error::input("mapping is not a bijection on [0, n)"));
        }
    }
    let edges: Vec<_> = g.edges().map(|(u, v)| (perm[u], perm[v])).collect();
    let graph = Graph::from_edges(n, &edges)?;

    let mut y = vec![0; n];
    for (u, &p) in perm.iter().enumerate() {
        y[p] = labels.y[u];
    }
    let known = labels.known.as_ref().map(|k| {
        let mut out = vec![false; n];
        for (u, &p) in perm.iter().enumerate() {
            out[p] = k[u];
        }
        out
    });
    Ok((
        graph,
        LabelSet {
            y,
            num_classes: labels.num_classes,
            known,
        },
    ))
}

/// Inverse of a bijection given as an index array.
pub fn invert_permutation(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (u, &p) in perm.iter().enumerate() {
        inv[p] = u;
    }
    inv
}
