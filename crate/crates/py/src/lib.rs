//! Python bindings: datasets, structural metrics, S-GCN training and
//! correlation helpers. Node ids are plain ints; labels are class names.

use std::collections::BTreeMap;

use hetgraph_core::analysis;
use hetgraph_core::ingest;
use hetgraph_core::metrics::{self, CcnsReduction};
use hetgraph_core::sgcn::{self, Init, TrainConfig, TrainHistory};
use hetgraph_core::synth::{self, PlantedPartitionSpec};
use hetgraph_core::{Dataset as CoreDataset, Error, Graph, LabelSet, WeightMatrix};
use pyo3::create_exception;
use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;

create_exception!(pyhetgraph, UndefinedError, PyValueError, "A statistic is undefined for the given input.");

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Undefined(_) => UndefinedError::new_err(e.to_string()),
        Error::Io { .. } => PyOSError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

trait IntoPy<T> {
    fn py_err(self) -> PyResult<T>;
}

impl<T> IntoPy<T> for hetgraph_core::Result<T> {
    fn py_err(self) -> PyResult<T> {
        self.map_err(to_py)
    }
}

/// A labeled undirected graph.
#[pyclass(name = "Dataset", module = "pyhetgraph")]
struct PyDataset {
    inner: CoreDataset,
}

impl PyDataset {
    fn graph(&self) -> &Graph {
        &self.inner.graph
    }

    fn labels(&self) -> &LabelSet {
        &self.inner.labels
    }
}

#[pymethods]
impl PyDataset {
    /// Builds a dataset from an edge list and one label string per node.
    #[new]
    fn new(n: usize, edges: Vec<(usize, usize)>, labels: Vec<String>) -> PyResult<Self> {
        Ok(PyDataset {
            inner: CoreDataset::from_string_labels(n, &edges, &labels).py_err()?,
        })
    }

    #[getter]
    fn node_count(&self) -> usize {
        self.graph().node_count()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.graph().edge_count()
    }

    #[getter]
    fn class_names(&self) -> Vec<String> {
        self.inner.class_names.clone()
    }

    /// Class index of every node.
    #[getter]
    fn labels_index(&self) -> Vec<usize> {
        self.labels().classes().to_vec()
    }

    /// Class name of every node.
    #[getter]
    fn label_names(&self) -> Vec<String> {
        self.labels()
            .classes()
            .iter()
            .map(|&c| self.inner.class_names[c].clone())
            .collect()
    }

    /// Visibility of each node's label, or None when every label is known.
    #[getter]
    fn mask(&self) -> Option<Vec<bool>> {
        self.labels().mask().map(<[bool]>::to_vec)
    }

    fn neighbors(&self, u: usize) -> PyResult<Vec<usize>> {
        Ok(self.graph().neighbors(u).py_err()?.to_vec())
    }

    fn degree(&self, u: usize) -> PyResult<usize> {
        self.graph().check_node(u).py_err()?;
        Ok(self.graph().degree(u))
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.graph().edges().collect()
    }

    /// Copy in which only `nodes` have visible labels.
    fn with_visible_nodes(&self, nodes: Vec<usize>) -> PyResult<Self> {
        let mut inner = self.inner.clone();
        inner.labels = inner.labels.with_visible_nodes(&nodes).py_err()?;
        Ok(PyDataset { inner })
    }

    fn edge_homophily(&self) -> PyResult<f64> {
        metrics::edge_homophily(self.graph(), self.labels()).py_err()
    }

    fn local_homophily(&self, u: usize) -> PyResult<f64> {
        metrics::local_homophily(self.graph(), self.labels(), u).py_err()
    }

    fn label_histogram(&self, u: usize) -> PyResult<Vec<u32>> {
        Ok(metrics::label_histogram(self.graph(), self.labels(), u).py_err()?.counts)
    }

    fn ccns_matrix(&self) -> PyResult<Vec<Vec<f64>>> {
        Ok(metrics::ccns_matrix(self.graph(), self.labels()).py_err()?.rows())
    }

    /// Graph-level CCNS: "diag_mean", "full_mean" or "weighted_diag".
    #[pyo3(signature = (reduction = "weighted_diag"))]
    fn ccns(&self, reduction: &str) -> PyResult<f64> {
        let r: CcnsReduction = reduction.parse().py_err()?;
        metrics::ccns_graph(self.graph(), self.labels(), r).py_err()
    }

    fn ccns_node(&self, u: usize) -> PyResult<f64> {
        metrics::ccns_node(self.graph(), self.labels(), u).py_err()
    }

    fn two_ncs_node(&self, u: usize) -> PyResult<f64> {
        metrics::two_ncs_node(self.graph(), self.labels(), u).py_err()
    }

    /// Graph-level 2NCS averaged over `subset` (default: labeled nodes).
    #[pyo3(signature = (subset = None))]
    fn two_ncs(&self, subset: Option<Vec<usize>>) -> PyResult<f64> {
        Ok(metrics::two_ncs_graph(self.graph(), self.labels(), subset.as_deref())
            .py_err()?
            .value)
    }

    /// Per-node metrics as a dict of lists; undefined entries are None.
    fn node_metrics(&self) -> PyResult<BTreeMap<&'static str, Vec<Option<f64>>>> {
        let m = metrics::node_metrics(self.graph(), self.labels()).py_err()?;
        Ok(BTreeMap::from([
            ("local_h", m.local_h),
            ("ccns_node", m.ccns),
            ("two_ncs", m.two_ncs),
        ]))
    }

    /// Writes `edges.tsv` and `nodes.tsv` into `dir`.
    fn write(&self, dir: std::path::PathBuf) -> PyResult<()> {
        ingest::write_dataset(dir, &self.inner).py_err()
    }

    fn __repr__(&self) -> String {
        format!(
            "Dataset(nodes={}, edges={}, classes={})",
            self.node_count(),
            self.edge_count(),
            self.inner.class_names.len()
        )
    }
}

/// Trained S-GCN weights together with the loss/accuracy history.
#[pyclass(name = "Model", module = "pyhetgraph")]
struct PyModel {
    weights: WeightMatrix,
    history: TrainHistory,
}

#[pymethods]
impl PyModel {
    #[getter]
    fn weights(&self) -> Vec<Vec<f64>> {
        (0..self.weights.rows()).map(|r| self.weights.row(r).to_vec()).collect()
    }

    #[getter]
    fn initial_loss(&self) -> f64 {
        self.history.initial_loss
    }

    #[getter]
    fn loss(&self) -> Vec<f64> {
        self.history.loss.clone()
    }

    #[getter]
    fn train_accuracy(&self) -> Vec<f64> {
        self.history.train_accuracy.clone()
    }

    #[getter]
    fn val_accuracy(&self) -> Option<Vec<f64>> {
        self.history.val_accuracy.clone()
    }

    /// Class index per node of `dataset`.
    fn predict(&self, dataset: &PyDataset) -> PyResult<Vec<usize>> {
        sgcn::predict(dataset.graph(), &self.weights).py_err()
    }

    /// Softmax output, one row per node.
    fn probabilities(&self, dataset: &PyDataset) -> PyResult<Vec<Vec<f64>>> {
        let h = sgcn::forward(dataset.graph(), &self.weights).py_err()?;
        Ok((0..h.rows()).map(|r| h.row(r).to_vec()).collect())
    }
}

fn config(lr: f64, epochs: usize, batch_size: Option<usize>, seed: u64, init_scale: Option<f64>) -> TrainConfig {
    TrainConfig {
        learning_rate: lr,
        epochs,
        batch_size,
        seed,
        init: match init_scale {
            Some(scale) => Init::Uniform { scale },
            None => Init::Zeros,
        },
    }
}

/// The fixed 113-node counterexample graph.
#[pyfunction]
fn fig2() -> PyDataset {
    PyDataset {
        inner: synth::build_fig2(),
    }
}

#[pyfunction]
fn planted_partition(sizes: Vec<usize>, p_in: f64, p_out: f64, seed: u64) -> PyResult<PyDataset> {
    let spec = PlantedPartitionSpec { sizes, p_in, p_out, seed };
    Ok(PyDataset {
        inner: synth::build_planted_partition(&spec).py_err()?,
    })
}

/// Loads either the native TSV layout or the geom-GCN layout from `dir`.
#[pyfunction]
fn load_dataset(dir: std::path::PathBuf) -> PyResult<PyDataset> {
    Ok(PyDataset {
        inner: ingest::load_dataset(dir).py_err()?,
    })
}

/// Seeded (train, val, test) node lists.
#[pyfunction]
#[pyo3(signature = (n, fractions = ingest::DEFAULT_FRACTIONS, seed = 0))]
fn generate_splits(n: usize, fractions: (f64, f64, f64), seed: u64) -> PyResult<(Vec<usize>, Vec<usize>, Vec<usize>)> {
    let s = ingest::generate_splits(n, fractions, seed).py_err()?;
    Ok((s.train, s.val, s.test))
}

#[pyfunction]
#[pyo3(signature = (dataset, train_nodes, val_nodes = None, lr = 0.1, epochs = 200, batch_size = None, seed = 0, init_scale = None))]
#[allow(clippy::too_many_arguments)]
fn train(
    py: Python<'_>,
    dataset: &PyDataset,
    train_nodes: Vec<usize>,
    val_nodes: Option<Vec<usize>>,
    lr: f64,
    epochs: usize,
    batch_size: Option<usize>,
    seed: u64,
    init_scale: Option<f64>,
) -> PyResult<PyModel> {
    let cfg = config(lr, epochs, batch_size, seed, init_scale);
    let (weights, history) = py
        .detach(|| sgcn::train(dataset.graph(), dataset.labels(), &train_nodes, val_nodes.as_deref(), &cfg))
        .py_err()?;
    Ok(PyModel { weights, history })
}

/// Hides `node`'s label, trains on every other labeled node and returns
/// `(predicted class name, correct)`.
#[pyfunction]
#[pyo3(signature = (dataset, node, lr = 0.1, epochs = 200, seed = 0))]
fn leave_one_out(py: Python<'_>, dataset: &PyDataset, node: usize, lr: f64, epochs: usize, seed: u64) -> PyResult<(String, bool)> {
    let cfg = config(lr, epochs, None, seed, None);
    let out = py
        .detach(|| sgcn::leave_one_out(dataset.graph(), dataset.labels(), node, &cfg))
        .py_err()?;
    Ok((dataset.inner.class_names[out.predicted].clone(), out.correct))
}

#[pyfunction]
fn pearson_r(xs: Vec<f64>, ys: Vec<f64>) -> PyResult<f64> {
    analysis::pearson_r(&xs, &ys).py_err()
}

/// Correlation between a per-node metric (None = undefined) and prediction
/// correctness. With `bins`, uses the binned accuracy curve instead of the
/// point-biserial coefficient.
#[pyfunction]
#[pyo3(signature = (metric, correct, bins = None))]
fn correlate(metric: Vec<Option<f64>>, correct: Vec<bool>, bins: Option<usize>) -> PyResult<(f64, usize)> {
    let method = match bins {
        Some(bins) => analysis::CorrelationMethod::Binned { bins },
        None => analysis::CorrelationMethod::PointBiserial,
    };
    let c = analysis::correlate_node_metric(&metric, &correct, method).py_err()?;
    Ok((c.r, c.used))
}

#[pymodule]
fn pyhetgraph(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDataset>()?;
    m.add_class::<PyModel>()?;
    m.add("UndefinedError", m.py().get_type::<UndefinedError>())?;
    m.add_function(wrap_pyfunction!(fig2, m)?)?;
    m.add_function(wrap_pyfunction!(planted_partition, m)?)?;
    m.add_function(wrap_pyfunction!(load_dataset, m)?)?;
    m.add_function(wrap_pyfunction!(generate_splits, m)?)?;
    m.add_function(wrap_pyfunction!(train, m)?)?;
    m.add_function(wrap_pyfunction!(leave_one_out, m)?)?;
    m.add_function(wrap_pyfunction!(pearson_r, m)?)?;
    m.add_function(wrap_pyfunction!(correlate, m)?)?;
    Ok(())
}
