//! CSV emitters and readers shared by the CLI and the bindings.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::ingest::Dataset;
use crate::metrics::NodeMetrics;

/// Formats with 6 significant digits, trailing zeros trimmed (`0.5`, `0.853333`, `1`).
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    if !(-7..15).contains(&magnitude) {
        return format!("{x:.5e}");
    }
    let decimals = (5 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    let s = if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_owned()
    } else {
        s
    };
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

fn cell(v: Option<f64>) -> String {
    v.map(fmt_sig).unwrap_or_default()
}

/// Column names of the per-node metric CSV.
pub const NODE_METRIC_COLUMNS: [&str; 3] = ["local_h", "ccns_node", "two_ncs"];

/// Per-node CSV with header `node_id,<columns>`; undefined values are empty cells.
pub fn node_metrics_csv(m: &NodeMetrics, columns: &[&str]) -> String {
    let mut out = String::from("node_id");
    for c in columns {
        out.push(',');
        out.push_str(c);
    }
    out.push('\n');
    for u in 0..m.two_ncs.len() {
        out.push_str(&u.to_string());
        for &c in columns {
            let v = match c {
                "local_h" => m.local_h[u],
                "ccns_node" => m.ccns[u],
                "two_ncs" => m.two_ncs[u],
                _ => None,
            };
            out.push(',');
            out.push_str(&cell(v));
        }
        out.push('\n');
    }
    out
}

/// A per-node metric CSV read back into columns keyed by header name.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeMetricTable {
    pub node_ids: Vec<usize>,
    pub columns: BTreeMap<String, Vec<Option<f64>>>,
}

pub fn read_node_metrics_csv(path: impl AsRef<Path>) -> Result<NodeMetricTable> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let perr = |line: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let header: Vec<String> = match lines.next() {
        Some((_, l)) => l.trim().split(',').map(|s| s.trim().to_owned()).collect(),
        None => return Err(perr(0, "empty metrics file".into())),
    };
    if header.first().map(String::as_str) != Some("node_id") || header.len() < 2 {
        return Err(perr(1, "header must be node_id followed by metric columns".into()));
    }
    let mut node_ids = Vec::new();
    let mut cols: Vec<Vec<Option<f64>>> = vec![Vec::new(); header.len() - 1];
    for (i, raw) in lines {
        let fields: Vec<&str> = raw.trim().split(',').map(str::trim).collect();
        if fields.len() != header.len() {
            return Err(perr(i + 1, format!("expected {} columns", header.len())));
        }
        node_ids.push(
            fields[0]
                .parse()
                .map_err(|_| perr(i + 1, format!("invalid node id {:?}", fields[0])))?,
        );
        for (col, f) in cols.iter_mut().zip(&fields[1..]) {
            col.push(if f.is_empty() {
                None
            } else {
                Some(f.parse().map_err(|_| perr(i + 1, format!("invalid value {f:?}")))?)
            });
        }
    }
    Ok(NodeMetricTable {
        node_ids,
        columns: header[1..].iter().cloned().zip(cols).collect(),
    })
}

/// Predictions CSV: `node_id,true_label,pred_label,correct`, labels as class names.
pub fn predictions_csv(ds: &Dataset, pred: &[usize], nodes: &[usize]) -> String {
    let mut out = String::from("node_id,true_label,pred_label,correct\n");
    for &u in nodes {
        let t = ds.labels.class_of(u);
        out.push_str(&format!(
            "{u},{},{},{}\n",
            ds.class_names[t],
            ds.class_names[pred[u]],
            t == pred[u]
        ));
    }
    out
}
