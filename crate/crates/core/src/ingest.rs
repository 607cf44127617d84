//! Plain-text dataset, label and split formats.
//!
//! * `edges.tsv`: `<u>\t<v>` rows (any whitespace), `#` comments, optional `# n=<int>` header.
//! * `nodes.tsv`: `<id>\t<label>[\t<f1,f2,...>]`.
//! * split files: one node index per line.
//! * geom-GCN layout: `out1_graph_edges.txt` and `out1_node_feature_label.txt`,
//!   each starting with one header line.

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{BuildStats, Graph, LabelSet};

pub const EDGES_FILE: &str = "edges.tsv";
pub const NODES_FILE: &str = "nodes.tsv";
pub const GEOM_EDGES_FILE: &str = "out1_graph_edges.txt";
pub const GEOM_NODES_FILE: &str = "out1_node_feature_label.txt";

#[derive(Debug, Clone)]
pub struct Dataset {
    pub graph: Graph,
    pub labels: LabelSet,
    /// Original label strings, indexed by class.
    pub class_names: Vec<String>,
    pub node_names: Option<Vec<String>>,
    /// Opaque per-node feature rows; never read by any metric or model.
    pub features: Option<Vec<Vec<f64>>>,
    pub build_stats: BuildStats,
}

impl Dataset {
    /// Assigns class indices by lexicographic order of the distinct label strings.
    pub fn from_string_labels(
        n: usize,
        edges: &[(usize, usize)],
        labels: &[impl AsRef<str>],
    ) -> Result<Self> {
        if labels.len() != n {
            return Err(Error::input(format!(
                "{} labels supplied for {n} nodes",
                labels.len()
            )));
        }
        let (graph, build_stats) = Graph::from_edges_with_stats(n, edges)?;
        let (y, class_names) = index_labels(labels);
        let labels = LabelSet::new(y, class_names.len().max(1))?;
        Ok(Dataset {
            graph,
            labels,
            class_names,
            node_names: None,
            features: None,
            build_stats,
        })
    }

    pub fn class_index(&self, name: &str) -> Option<usize> {
        self.class_names.iter().position(|c| c == name)
    }

    /// True when graph, labels and class names agree.
    pub fn same_content(&self, other: &Dataset) -> bool {
        self.graph == other.graph
            && self.labels == other.labels
            && self.class_names == other.class_names
    }
}

fn index_labels(labels: &[impl AsRef<str>]) -> (Vec<usize>, Vec<String>) {
    let names: Vec<String> = labels
        .iter()
        .map(|s| s.as_ref())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .map(str::to_owned)
        .collect();
    let y = labels
        .iter()
        .map(|s| names.binary_search_by(|c| c.as_str().cmp(s.as_ref())).unwrap())
        .collect();
    (y, names)
}

fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

/// Parsed edge-list file: node count and raw (unsymmetrized) pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeList {
    pub n: usize,
    pub pairs: Vec<(usize, usize)>,
}

pub fn load_edge_list(path: impl AsRef<Path>) -> Result<EdgeList> {
    let path = path.as_ref();
    parse_edge_list(path, &read_to_string(path)?)
}

fn parse_edge_list(path: &Path, text: &str) -> Result<EdgeList> {
    let mut declared_n = None;
    let mut pairs = Vec::new();
    let mut saw_content = false;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        saw_content = true;
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(v) = comment.trim().strip_prefix("n=") {
                let n = v
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| parse_err(path, line_no, format!("bad node-count header {line:?}")))?;
                declared_n = Some(n);
            }
            continue;
        }
        let mut fields = line.split_whitespace();
        let (Some(a), Some(b), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(parse_err(path, line_no, format!("expected two node ids, got {line:?}")));
        };
        let parse = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| parse_err(path, line_no, format!("invalid node id {s:?}")))
        };
        pairs.push((parse(a)?, parse(b)?));
    }
    if !saw_content {
        return Err(parse_err(path, 0, "empty edge file"));
    }
    let implied = pairs.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
    let n = match declared_n {
        Some(n) if n < implied => {
            return Err(parse_err(
                path,
                0,
                format!("header declares n={n} but edges reference node {}", implied - 1),
            ))
        }
        Some(n) => n,
        None => implied,
    };
    Ok(EdgeList { n, pairs })
}

/// Labels, class names and optional features read from a node table.
#[derive(Debug, Clone)]
pub struct NodeTable {
    pub labels: LabelSet,
    pub class_names: Vec<String>,
    pub features: Option<Vec<Vec<f64>>>,
}

pub fn load_node_table(path: impl AsRef<Path>, n: usize) -> Result<NodeTable> {
    let path = path.as_ref();
    let text = read_to_string(path)?;
    let mut label_of: Vec<Option<String>> = vec![None; n];
    let mut features: Vec<Option<Vec<f64>>> = vec![None; n];
    let mut any_features = false;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() < 2 || cols.len() > 3 {
            return Err(parse_err(
                path,
                line_no,
                "expected <id>\\t<label>[\\t<features>]",
            ));
        }
        let id = parse_node_id(path, line_no, cols[0], n)?;
        if label_of[id].is_some() {
            return Err(parse_err(path, line_no, format!("duplicate node id {id}")));
        }
        label_of[id] = Some(cols[1].to_owned());
        if let Some(f) = cols.get(2) {
            any_features = true;
            features[id] = Some(parse_features(path, line_no, f)?);
        }
    }
    let labels = collect_labels(path, label_of)?;
    let features = if any_features {
        let rows = features
            .into_iter()
            .enumerate()
            .map(|(u, r)| r.ok_or_else(|| Error::input(format!("{}: node {u} has no feature column", path.display()))))
            .collect::<Result<Vec<_>>>()?;
        if let Some(w) = rows.first().map(Vec::len) {
            if let Some(u) = rows.iter().position(|r| r.len() != w) {
                return Err(Error::input(format!(
                    "{}: ragged feature rows (node {u} has {} values, expected {w})",
                    path.display(),
                    rows[u].len()
                )));
            }
        }
        Some(rows)
    } else {
        None
    };
    let (y, class_names) = index_labels(&labels);
    Ok(NodeTable {
        labels: LabelSet::new(y, class_names.len().max(1))?,
        class_names,
        features,
    })
}

fn parse_node_id(path: &Path, line_no: usize, s: &str, n: usize) -> Result<usize> {
    let id = s
        .trim()
        .parse::<usize>()
        .map_err(|_| parse_err(path, line_no, format!("invalid node id {s:?}")))?;
    if id >= n {
        return Err(parse_err(
            path,
            line_no,
            format!("node id {id} out of range (n={n})"),
        ));
    }
    Ok(id)
}

fn parse_features(path: &Path, line_no: usize, s: &str) -> Result<Vec<f64>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| parse_err(path, line_no, format!("invalid feature value {v:?}")))
        })
        .collect()
}

fn collect_labels(path: &Path, label_of: Vec<Option<String>>) -> Result<Vec<String>> {
    label_of
        .into_iter()
        .enumerate()
        .map(|(u, l)| {
            l.ok_or_else(|| Error::input(format!("{}: missing node id {u}", path.display())))
        })
        .collect()
}

/// Loads a `edges.tsv` + `nodes.tsv` directory.
pub fn load_tsv_dir(dir: impl AsRef<Path>) -> Result<Dataset> {
    let dir = dir.as_ref();
    let edges_path = dir.join(EDGES_FILE);
    let nodes_path = dir.join(NODES_FILE);
    require_file(&edges_path)?;
    require_file(&nodes_path)?;
    let edges = load_edge_list(&edges_path)?;
    // The node table may name nodes that have no edges.
    let n = edges.n.max(count_node_rows(&nodes_path)?);
    let table = load_node_table(&nodes_path, n)?;
    let (graph, build_stats) = Graph::from_edges_with_stats(n, &edges.pairs)?;
    Ok(Dataset {
        graph,
        labels: table.labels,
        class_names: table.class_names,
        node_names: None,
        features: table.features,
        build_stats,
    })
}

fn count_node_rows(path: &Path) -> Result<usize> {
    Ok(read_to_string(path)?
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .count())
}

fn require_file(path: &Path) -> Result<()> {
    if path.is_file() {
        Ok(())
    } else {
        Err(Error::input(format!(
            "expected file {} not found",
            path.display()
        )))
    }
}

/// Loads the geom-GCN on-disk layout. Edge rows are treated as directed and
/// symmetrized; `build_stats` records raw, asymmetric and collapsed counts.
pub fn load_geomgcn_dir(dir: impl AsRef<Path>) -> Result<Dataset> {
    let dir = dir.as_ref();
    let edges_path = dir.join(GEOM_EDGES_FILE);
    let nodes_path = dir.join(GEOM_NODES_FILE);
    require_file(&edges_path)?;
    require_file(&nodes_path)?;

    let node_text = read_to_string(&nodes_path)?;
    let rows: Vec<(usize, &str)> = node_text
        .lines()
        .enumerate()
        .skip(1)
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .collect();
    let n = rows.len();
    let mut label_of: Vec<Option<String>> = vec![None; n];
    let mut features: Vec<Vec<f64>> = vec![Vec::new(); n];
    for (line_no, line) in rows {
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 3 {
            return Err(parse_err(
                &nodes_path,
                line_no,
                "expected <id>\\t<features>\\t<label>",
            ));
        }
        let id = parse_node_id(&nodes_path, line_no, cols[0], n)?;
        if label_of[id].is_some() {
            return Err(parse_err(&nodes_path, line_no, format!("duplicate node id {id}")));
        }
        label_of[id] = Some(cols[2].trim().to_owned());
        features[id] = parse_features(&nodes_path, line_no, cols[1])?;
    }
    let labels = collect_labels(&nodes_path, label_of)?;

    let edge_text = read_to_string(&edges_path)?;
    let mut pairs = Vec::new();
    for (i, raw) in edge_text.lines().enumerate().skip(1) {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let mut f = line.split_whitespace();
        let (Some(a), Some(b), None) = (f.next(), f.next(), f.next()) else {
            return Err(parse_err(&edges_path, line_no, format!("expected two node ids, got {line:?}")));
        };
        let u = a
            .parse::<usize>()
            .map_err(|_| parse_err(&edges_path, line_no, format!("invalid node id {a:?}")))?;
        let v = b
            .parse::<usize>()
            .map_err(|_| parse_err(&edges_path, line_no, format!("invalid node id {b:?}")))?;
        if u >= n || v >= n {
            return Err(parse_err(
                &edges_path,
                line_no,
                format!("edge ({u}, {v}) references a node absent from {GEOM_NODES_FILE}"),
            ));
        }
        pairs.push((u, v));
    }

    let mut ds = Dataset::from_string_labels(n, &pairs, &labels)?;
    ds.features = Some(features);
    Ok(ds)
}

/// Loads either layout, detected by the files present in `dir`.
pub fn load_dataset(dir: impl AsRef<Path>) -> Result<Dataset> {
    let dir = dir.as_ref();
    if !dir.exists() {
        return Err(Error::input(format!("dataset path {} does not exist", dir.display())));
    }
    if dir.join(GEOM_EDGES_FILE).exists() || dir.join(GEOM_NODES_FILE).exists() {
        load_geomgcn_dir(dir)
    } else if dir.join(EDGES_FILE).exists() || dir.join(NODES_FILE).exists() {
        load_tsv_dir(dir)
    } else {
        Err(Error::input(format!(
            "{}: expected {EDGES_FILE} + {NODES_FILE} or {GEOM_EDGES_FILE} + {GEOM_NODES_FILE}",
            dir.display()
        )))
    }
}

pub fn format_edge_list(g: &Graph) -> String {
    let mut out = format!("# n={}\n", g.node_count());
    for (u, v) in g.edges() {
        out.push_str(&format!("{u}\t{v}\n"));
    }
    out
}

pub fn format_node_table(ds: &Dataset) -> String {
    let mut out = String::new();
    for u in 0..ds.graph.node_count() {
        out.push_str(&format!("{u}\t{}", ds.class_names[ds.labels.class_of(u)]));
        if let Some(f) = &ds.features {
            let row: Vec<String> = f[u].iter().map(|x| x.to_string()).collect();
            out.push('\t');
            out.push_str(&row.join(","));
        }
        out.push('\n');
    }
    out
}

/// Writes `edges.tsv` and `nodes.tsv` into `dir`, creating it if needed.
pub fn write_dataset(dir: impl AsRef<Path>, ds: &Dataset) -> Result<()> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    write_atomic(dir.join(EDGES_FILE), format_edge_list(&ds.graph).as_bytes())?;
    write_atomic(dir.join(NODES_FILE), format_node_table(ds).as_bytes())?;
    Ok(())
}

/// Writes via a temporary sibling file and a rename.
pub fn write_atomic(path: impl AsRef<Path>, bytes: &[u8]) -> Result<()> {
    let path = path.as_ref();
    let parent = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(&parent).map_err(|e| Error::io(&parent, e))?;
    tmp.write_all(bytes).map_err(|e| Error::io(path, e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SplitSet {
    pub train: Vec<usize>,
    pub val: Vec<usize>,
    pub test: Vec<usize>,
}

pub const DEFAULT_FRACTIONS: (f64, f64, f64) = (0.6, 0.2, 0.2);

impl SplitSet {
    pub fn new(train: Vec<usize>, val: Vec<usize>, test: Vec<usize>, n: usize) -> Result<Self> {
        let mut seen = vec![false; n];
        for (name, part) in [("train", &train), ("val", &val), ("test", &test)] {
            for &u in part {
                if u >= n {
                    return Err(Error::input(format!("{name} node {u} out of range (n={n})")));
                }
                if std::mem::replace(&mut seen[u], true) {
                    return Err(Error::input(format!("node {u} appears in more than one split")));
                }
            }
        }
        let sorted = |mut v: Vec<usize>| {
            v.sort_unstable();
            v
        };
        Ok(SplitSet {
            train: sorted(train),
            val: sorted(val),
            test: sorted(test),
        })
    }
}

/// Seeded shuffle of `[0, n)` cut into train/val/test slices.
///
/// Slice sizes are `floor(n * fraction)`. When the fractions sum to one the
/// rounding remainder is assigned to test.
pub fn generate_splits(n: usize, fractions: (f64, f64, f64), seed: u64) -> Result<SplitSet> {
    let (ft, fv, fs) = fractions;
    let sum = ft + fv + fs;
    if [ft, fv, fs].iter().any(|f| !f.is_finite() || *f < 0.0) || sum > 1.0 + 1e-9 {
        return Err(Error::input(format!(
            "split fractions ({ft}, {fv}, {fs}) must be nonnegative and sum to at most 1"
        )));
    }
    let take = |f: f64| ((n as f64) * f + 1e-9).floor() as usize;
    let n_train = take(ft).min(n);
    let n_val = take(fv).min(n - n_train);
    let n_test = if (sum - 1.0).abs() <= 1e-9 {
        n - n_train - n_val
    } else {
        take(fs).min(n - n_train - n_val)
    };

    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);
    let train = order[..n_train].to_vec();
    let val = order[n_train..n_train + n_val].to_vec();
    let test = order[n_train + n_val..n_train + n_val + n_test].to_vec();
    SplitSet::new(train, val, test, n)
}

/// Reads one index per line; returns a sorted, deduplicated list.
pub fn load_split(path: impl AsRef<Path>, n: usize) -> Result<Vec<usize>> {
    let path = path.as_ref();
    let text = read_to_string(path)?;
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        out.push(parse_node_id(path, i + 1, line, n)?);
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

pub fn format_split(nodes: &[usize]) -> String {
    nodes.iter().map(|u| format!("{u}\n")).collect()
}

pub fn write_split(path: impl AsRef<Path>, nodes: &[usize]) -> Result<()> {
    write_atomic(path, format_split(nodes).as_bytes())
}

/// Reads `train.txt`, and `val.txt` / `test.txt` when present.
pub fn load_split_dir(dir: impl AsRef<Path>, n: usize) -> Result<SplitSet> {
    let dir = dir.as_ref();
    let train_path = dir.join("train.txt");
    require_file(&train_path)?;
    let part = |name: &str| -> Result<Vec<usize>> {
        let p = dir.join(name);
        if p.exists() {
            load_split(p, n)
        } else {
            Ok(Vec::new())
        }
    };
    SplitSet::new(load_split(train_path, n)?, part("val.txt")?, part("test.txt")?, n)
}

pub fn write_split_dir(dir: impl AsRef<Path>, split: &SplitSet) -> Result<()> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    write_split(dir.join("train.txt"), &split.train)?;
    write_split(dir.join("val.txt"), &split.val)?;
    write_split(dir.join("test.txt"), &split.test)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tmp_file(contents: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        f
    }

    #[test]
    fn edge_list_basic() {
        let f = tmp_file("0 1\n1 2");
        let el = load_edge_list(f.path()).unwrap();
        assert_eq!(el.n, 3);
        assert_eq!(el.pairs, vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn edge_list_header_adds_isolated_nodes() {
        let f = tmp_file("# n=5\n0 1\n");
        let el = load_edge_list(f.path()).unwrap();
        assert_eq!(el.n, 5);
        let g = Graph::from_edges(el.n, &el.pairs).unwrap();
        assert_eq!((2..5).filter(|&u| g.degree(u) == 0).count(), 3);
    }

    #[test]
    fn edge_list_errors() {
        let f = tmp_file("0 x");
        match load_edge_list(f.path()).unwrap_err() {
            Error::Parse { line, .. } => assert_eq!(line, 1),
            e => panic!("unexpected {e}"),
        }
        let f = tmp_file("0 1\n1 2 3\n");
        match load_edge_list(f.path()).unwrap_err() {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            e => panic!("unexpected {e}"),
        }
        let f = tmp_file("");
        assert!(load_edge_list(f.path()).is_err());
        let f = tmp_file("# n=2\n0 5\n");
        assert!(load_edge_list(f.path()).is_err());
    }

    #[test]
    fn node_table_lexicographic() {
        let f = tmp_file("0\tred\n1\tblue\n2\tred\n");
        let t = load_node_table(f.path(), 3).unwrap();
        assert_eq!(t.labels.num_classes(), 2);
        assert_eq!(t.class_names, vec!["blue", "red"]);
        assert_eq!(t.labels.classes(), &[1, 0, 1]);
        assert!(t.features.is_none());

        let f = tmp_file("0\tx\n1\tx\n");
        let t = load_node_table(f.path(), 2).unwrap();
        assert_eq!(t.labels.num_classes(), 1);
        assert_eq!(t.labels.classes(), &[0, 0]);
    }

    #[test]
    fn node_table_errors() {
        let f = tmp_file("0\ta\n0\tb\n");
        assert!(load_node_table(f.path(), 2).is_err());
        let f = tmp_file("0\ta\n");
        assert!(load_node_table(f.path(), 2).unwrap_err().to_string().contains("missing node id 1"));
        let f = tmp_file("0\ta\t1,2\n1\tb\t3\n");
        assert!(load_node_table(f.path(), 2).unwrap_err().to_string().contains("ragged"));
        let f = tmp_file("0\ta\t1,2\n1\tb\t3,4\n");
        let t = load_node_table(f.path(), 2).unwrap();
        assert_eq!(t.features.unwrap(), vec![vec![1.0, 2.0], vec![3.0, 4.0]]);
    }

    #[test]
    fn geomgcn_row_layout() {
        let dir = tempfile::tempdir().unwrap();
        let mut nodes = String::from("node_id\tfeature\tlabel\n");
        for u in 0..5 {
            let f = if u == 4 { "1,0,1" } else { "0,0,0" };
            let label = if u == 4 { "3" } else { "1" };
            nodes.push_str(&format!("{u}\t{f}\t{label}\n"));
        }
        fs::write(dir.path().join(GEOM_NODES_FILE), nodes).unwrap();
        fs::write(
            dir.path().join(GEOM_EDGES_FILE),
            "node_id\tnode_id\n0\t1\n1\t0\n2\t4\n4\t4\n",
        )
        .unwrap();
        let ds = load_geomgcn_dir(dir.path()).unwrap();
        assert_eq!(ds.graph.node_count(), 5);
        assert_eq!(ds.class_names, vec!["1", "3"]);
        assert_eq!(ds.class_names[ds.labels.class_of(4)], "3");
        assert_eq!(ds.features.as_ref().unwrap()[4], vec![1.0, 0.0, 1.0]);
        assert_eq!(ds.graph.edge_count(), 2);
        assert_eq!(ds.build_stats.raw_pairs, 4);
        assert_eq!(ds.build_stats.self_loops, 1);
        assert_eq!(ds.build_stats.asymmetric_pairs, 1);
    }

    #[test]
    fn geomgcn_missing_and_mismatch() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join(GEOM_NODES_FILE), "h\n0\t1\ta\n").unwrap();
        let err = load_geomgcn_dir(dir.path()).unwrap_err();
        assert!(err.to_string().contains(GEOM_EDGES_FILE), "{err}");
        fs::write(dir.path().join(GEOM_EDGES_FILE), "h\n0\t3\n").unwrap();
        assert!(load_geomgcn_dir(dir.path()).is_err());
    }

    #[test]
    fn splits_sizes_and_determinism() {
        let s = generate_splits(10, (0.6, 0.2, 0.2), 7).unwrap();
        assert_eq!((s.train.len(), s.val.len(), s.test.len()), (6, 2, 2));
        let all: BTreeSet<_> = s.train.iter().chain(&s.val).chain(&s.test).collect();
        assert_eq!(all.len(), 10);
        assert_eq!(s, generate_splits(10, (0.6, 0.2, 0.2), 7).unwrap());
        assert_ne!(s, generate_splits(10, (0.6, 0.2, 0.2), 8).unwrap());

        let all_train = generate_splits(10, (1.0, 0.0, 0.0), 0).unwrap();
        assert_eq!(all_train.train, (0..10).collect::<Vec<_>>());
        assert!(all_train.val.is_empty() && all_train.test.is_empty());

        let partial = generate_splits(10, (0.5, 0.2, 0.1), 0).unwrap();
        assert_eq!((partial.train.len(), partial.val.len(), partial.test.len()), (5, 2, 1));

        assert!(generate_splits(10, (0.7, 0.3, 0.2), 0).is_err());
        assert!(generate_splits(10, (-0.1, 0.3, 0.2), 0).is_err());
    }

    #[test]
    fn split_files() {
        let f = tmp_file("2\n0\n2\n");
        assert_eq!(load_split(f.path(), 10).unwrap(), vec![0, 2]);
        let f = tmp_file("");
        assert!(load_split(f.path(), 10).unwrap().is_empty());
        let f = tmp_file("99\n");
        assert!(load_split(f.path(), 10).is_err());
    }

    #[test]
    fn overlapping_split_rejected() {
        assert!(SplitSet::new(vec![0, 1], vec![1], vec![], 3).is_err());
    }
}
