//! Structural diagnostics for node classification on labeled graphs.
//!
//! The crate computes edge and local homophily, cross-class neighborhood
//! similarity (CCNS) and 2-hop neighbor class similarity (2NCS), trains a
//! one-layer GCN with identity features (`softmax((A + I) W)`) using exact
//! gradients, and correlates metrics with per-node or per-dataset accuracy.

pub mod analysis;
pub mod cli;
pub mod error;
pub mod graph;
pub mod ingest;
pub mod metrics;
pub mod report;
pub mod sgcn;
pub mod synth;

pub use error::{Error, Result};
pub use graph::{Graph, LabelSet};
pub use ingest::{Dataset, SplitSet};
pub use sgcn::{DenseMatrix, TrainConfig, WeightMatrix};
