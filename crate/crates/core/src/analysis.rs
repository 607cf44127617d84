//! Correlation of structural metrics with classifier accuracy.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::LabelSet;
use crate::report::fmt_sig;

/// Sample Pearson correlation coefficient.
pub fn pearson_r(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::input(format!(
            "series lengths differ ({} vs {})",
            xs.len(),
            ys.len()
        )));
    }
    if xs.len() < 2 {
        return Err(Error::undefined("correlation needs at least two points"));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (&x, &y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::undefined("correlation with a constant series"));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum CorrelationMethod {
    /// Pearson r between the metric and 0/1 correctness.
    PointBiserial,
    /// Equal-width bins over the metric range; Pearson r between bin
    /// midpoints and per-bin accuracy, skipping empty bins.
    Binned { bins: usize },
}

impl CorrelationMethod {
    pub fn name(&self) -> String {
        match self {
            CorrelationMethod::PointBiserial => "point_biserial".into(),
            CorrelationMethod::Binned { bins } => format!("binned({bins})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinSummary {
    pub lower: f64,
    pub upper: f64,
    pub midpoint: f64,
    pub count: usize,
    pub accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeCorrelation {
    pub r: f64,
    pub method: CorrelationMethod,
    /// Nodes that entered the statistic.
    pub used: usize,
    /// Nodes dropped because their metric was undefined.
    pub dropped: usize,
    /// Populated for the binned method only.
    pub bins: Vec<BinSummary>,
}

/// Correlates a per-node metric with per-node correctness.
pub fn correlate_node_metric(
    metric: &[Option<f64>],
    correct: &[bool],
    method: CorrelationMethod,
) -> Result<NodeCorrelation> {
    if metric.len() != correct.len() {
        return Err(Error::input(format!(
            "{} metric values but {} correctness flags",
            metric.len(),
            correct.len()
        )));
    }
    let (xs, hits): (Vec<f64>, Vec<bool>) = metric
        .iter()
        .zip(correct)
        .filter_map(|(m, &c)| m.map(|m| (m, c)))
        .unzip();
    let dropped = metric.len() - xs.len();
    if xs.len() < 2 {
        return Err(Error::undefined(format!(
            "only {} node(s) with a defined metric",
            xs.len()
        )));
    }
    match method {
        CorrelationMethod::PointBiserial => {
            let ys: Vec<f64> = hits.iter().map(|&c| f64::from(u8::from(c))).collect();
            Ok(NodeCorrelation {
                r: pearson_r(&xs, &ys)?,
                method,
                used: xs.len(),
                dropped,
                bins: Vec::new(),
            })
        }
        CorrelationMethod::Binned { bins } => {
            if bins == 0 {
                return Err(Error::input("bin count must be at least 1"));
            }
            let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let width = (hi - lo) / bins as f64;
            let mut count = vec![0usize; bins];
            let mut right = vec![0usize; bins];
            for (&x, &c) in xs.iter().zip(&hits) {
                let b = if width > 0.0 {
                    (((x - lo) / width) as usize).min(bins - 1)
                } else {
                    0
                };
                count[b] += 1;
                right[b] += usize::from(c);
            }
            let summaries: Vec<BinSummary> = (0..bins)
                .filter(|&b| count[b] > 0)
                .map(|b| BinSummary {
                    lower: lo + b as f64 * width,
                    upper: lo + (b + 1) as f64 * width,
                    midpoint: lo + (b as f64 + 0.5) * width,
                    count: count[b],
                    accuracy: right[b] as f64 / count[b] as f64,
                })
                .collect();
            if summaries.len() < 2 {
                return Err(Error::undefined("fewer than two nonempty bins"));
            }
            let mids: Vec<f64> = summaries.iter().map(|s| s.midpoint).collect();
            let accs: Vec<f64> = summaries.iter().map(|s| s.accuracy).collect();
            Ok(NodeCorrelation {
                r: pearson_r(&mids, &accs)?,
                method,
                used: xs.len(),
                dropped,
                bins: summaries,
            })
        }
    }
}

/// Accuracy restricted to each class, `None` for classes without nodes.
pub fn per_class_accuracy(pred: &[usize], labels: &LabelSet, subset: Option<&[usize]>) -> Result<Vec<Option<f64>>> {
    if pred.len() != labels.len() {
        return Err(Error::input("prediction and label lengths differ"));
    }
    let k = labels.num_classes();
    let mut total = vec![0usize; k];
    let mut hits = vec![0usize; k];
    let all: Vec<usize>;
    let nodes = match subset {
        Some(s) => s,
        None => {
            all = (0..pred.len()).collect();
            &all
        }
    };
    for &u in nodes {
        if u >= pred.len() {
            return Err(Error::input(format!("node {u} out of range")));
        }
        let c = labels.class_of(u);
        total[c] += 1;
        hits[c] += usize::from(pred[u] == c);
    }
    Ok((0..k)
        .map(|c| (total[c] > 0).then(|| hits[c] as f64 / total[c] as f64))
        .collect())
}

/// One dataset's graph-level metrics and model accuracies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSummary {
    pub dataset: String,
    pub homophily: f64,
    pub ccns: f64,
    pub two_ncs: f64,
    /// Accuracy per model name.
    pub accuracy: BTreeMap<String, f64>,
}

/// One report line. Absent fields serialize as `null`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub dataset: Option<String>,
    pub metric: String,
    pub level: String,
    pub value: Option<f64>,
    pub model: Option<String>,
    pub accuracy: Option<f64>,
    pub r: Option<f64>,
    pub method: Option<String>,
    pub dropped: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub records: Vec<ReportRecord>,
}

const REPORT_COLUMNS: [&str; 9] = [
    "dataset", "metric", "level", "value", "model", "accuracy", "r", "method", "dropped",
];

fn round_sig(x: f64) -> f64 {
    fmt_sig(x).parse().unwrap_or(x)
}

impl MetricReport {
    pub fn push(&mut self, record: ReportRecord) {
        self.records.push(record);
    }

    /// JSON array of records; reals rounded to 6 significant digits.
    pub fn to_json(&self) -> String {
        let rounded: Vec<ReportRecord> = self
            .records
            .iter()
            .map(|r| ReportRecord {
                value: r.value.map(round_sig),
                accuracy: r.accuracy.map(round_sig),
                r: r.r.map(round_sig),
                ..r.clone()
            })
            .collect();
        let mut s = serde_json::to_string_pretty(&rounded).expect("records serialize");
        s.push('\n');
        s
    }

    fn cells(r: &ReportRecord) -> [String; 9] {
        let opt = |v: Option<f64>| v.map(fmt_sig).unwrap_or_default();
        [
            r.dataset.clone().unwrap_or_default(),
            r.metric.clone(),
            r.level.clone(),
            opt(r.value),
            r.model.clone().unwrap_or_default(),
            opt(r.accuracy),
            opt(r.r),
            r.method.clone().unwrap_or_default(),
            r.dropped.map(|d| d.to_string()).unwrap_or_default(),
        ]
    }

    pub fn to_csv(&self) -> String {
        let mut out = REPORT_COLUMNS.join(",");
        out.push('\n');
        for r in &self.records {
            out.push_str(&Self::cells(r).map(|c| csv_escape(&c)).join(","));
            out.push('\n');
        }
        out
    }

    /// Space-aligned table; columns that are empty in every record are omitted.
    pub fn to_text(&self) -> String {
        let rows: Vec<[String; 9]> = self.records.iter().map(Self::cells).collect();
        let keep: Vec<usize> = (0..REPORT_COLUMNS.len())
            .filter(|&i| rows.iter().any(|r| !r[i].is_empty()))
            .collect();
        let width = |i: usize| {
            rows.iter()
                .map(|r| r[i].len())
                .chain([REPORT_COLUMNS[i].len()])
                .max()
                .unwrap_or(0)
        };
        let widths: Vec<usize> = keep.iter().map(|&i| width(i)).collect();
        let line = |cells: Vec<&str>| {
            let padded: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, &w)| format!("{:<w$}", if c.is_empty() { "-" } else { c }))
                .collect();
            let mut l = padded.join("  ").trim_end().to_owned();
            l.push('\n');
            l
        };
        let mut out = line(keep.iter().map(|&i| REPORT_COLUMNS[i]).collect());
        for r in &rows {
            out.push_str(&line(keep.iter().map(|&i| r[i].as_str()).collect()));
        }
        out
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

/// One row per dataset and metric, plus Pearson r of each metric against
/// each model's accuracy across datasets.
pub fn graph_level_table(datasets: &[DatasetSummary]) -> Result<MetricReport> {
    if datasets.len() < 2 {
        return Err(Error::undefined(format!(
            "graph-level correlation needs at least two datasets, got {}",
            datasets.len()
        )));
    }
    let models: Vec<&String> = datasets[0].accuracy.keys().collect();
    for d in &datasets[1..] {
        if d.accuracy.keys().collect::<Vec<_>>() != models {
            return Err(Error::input(format!(
                "dataset {} reports a different set of models",
                d.dataset
            )));
        }
    }
    type Getter = fn(&DatasetSummary) -> f64;
    let metrics: [(&str, Getter); 3] = [
        ("h", |d| d.homophily),
        ("ccns", |d| d.ccns),
        ("2ncs", |d| d.two_ncs),
    ];
    let mut report = MetricReport::default();
    for d in datasets {
        for (name, get) in &metrics {
            for model in &models {
                report.push(ReportRecord {
                    dataset: Some(d.dataset.clone()),
                    metric: (*name).into(),
                    level: "graph".into(),
                    value: Some(get(d)),
                    model: Some((*model).clone()),
                    accuracy: Some(d.accuracy[*model]),
                    ..Default::default()
                });
            }
        }
    }
    for (name, get) in &metrics {
        let xs: Vec<f64> = datasets.iter().map(get).collect();
        for model in &models {
            let ys: Vec<f64> = datasets.iter().map(|d| d.accuracy[*model]).collect();
            report.push(ReportRecord {
                metric: (*name).into(),
                level: "graph".into(),
                model: Some((*model).clone()),
                r: Some(pearson_r(&xs, &ys)?),
                method: Some("pearson".into()),
                dropped: Some(0),
                ..Default::default()
            });
        }
    }
    Ok(report)
}

/// Reads per-node correctness from a CSV with header
/// `node_id,true_label,pred_label[,...]` or `node_id,correct`.
///
/// The result has one entry per node; nodes absent from the file are `None`.
pub fn load_external_predictions(path: impl AsRef<Path>, n: usize) -> Result<Vec<Option<bool>>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_predictions(path, &text, n)
}

fn parse_predictions(path: &Path, text: &str, n: usize) -> Result<Vec<Option<bool>>> {
    let perr = |line: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut lines = text.lines().enumerate();
    let header: Vec<&str> = loop {
        match lines.next() {
            Some((_, l)) if l.trim().is_empty() => continue,
            Some((_, l)) => break l.trim().split(',').map(str::trim).collect(),
            None => return Err(perr(0, "empty predictions file".into())),
        }
    };
    enum Layout {
        Labels,
        Flag,
    }
    let layout = match header.as_slice() {
        ["node_id", "true_label", "pred_label", ..] => Layout::Labels,
        ["node_id", "correct"] => Layout::Flag,
        _ => {
            return Err(perr(
                1,
                format!(
                    "header must start with node_id,true_label,pred_label or be node_id,correct; got {:?}",
                    header.join(",")
                ),
            ))
        }
    };
    let mut out = vec![None; n];
    for (i, raw) in lines {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').map(str::trim).collect();
        if cols.len() != header.len() {
            return Err(perr(line_no, format!("expected {} columns", header.len())));
        }
        let id: usize = cols[0]
            .parse()
            .map_err(|_| perr(line_no, format!("invalid node id {:?}", cols[0])))?;
        if id >= n {
            return Err(perr(line_no, format!("unknown node id {id} (n={n})")));
        }
        let flag = match layout {
            Layout::Labels => cols[1] == cols[2],
            Layout::Flag => match cols[1] {
                "1" | "true" | "True" => true,
                "0" | "false" | "False" => false,
                other => return Err(perr(line_no, format!("invalid correctness flag {other:?}"))),
            },
        };
        out[id] = Some(flag);
    }
    Ok(out)
}
