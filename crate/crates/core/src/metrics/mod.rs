//! Social network statistics on the sign layers of a [`SignedDiGraph`].
//!
//! Unless a function says otherwise, a layer is analysed as an undirected
//! graph: the two directions of a dyad are merged and, in the default
//! unweighted view, any positive weight counts as one edge. The node set is
//! the layer's participating nodes (those with at least one tie in that
//! layer), so isolates of one layer do not dilute its statistics.

mod centrality;
mod cohesion;
mod ei;
mod triads;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Sign, SignedDiGraph};
use crate::linalg::SquareMatrix;

pub use centrality::{betweenness_centrality, degree_centrality, eigenvector_centrality};
pub use cohesion::{clustering_coefficient, density, signed_transitivity, TransitivityReport};
pub use ei::{ei_index, ei_index_with_labels, EIResult, EiOptions};
pub use triads::{triad_census, TriadCensus};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricsError {
    #[error("layer has {nodes} participating nodes, need at least {needed}")]
    DegenerateGraph { nodes: usize, needed: usize },

    #[error("power iteration did not converge in {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("layer has no ties")]
    NoTies,

    #[error("{labels} labels supplied for {nodes} nodes")]
    LabelCount { labels: usize, nodes: usize },

    #[error("permutations must be at least 1")]
    NoPermutations,

    #[error("could not start worker pool: {0}")]
    Workers(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Treatment {
    #[default]
    UndirectedUnweighted,
    UndirectedWeighted,
}

/// Which layer to analyse and how to read its weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerView {
    pub which: Sign,
    #[serde(default)]
    pub treat_as: Treatment,
}

impl LayerView {
    pub fn negative() -> Self {
        Self {
            which: Sign::Negative,
            treat_as: Treatment::UndirectedUnweighted,
        }
    }

    pub fn positive() -> Self {
        Self {
            which: Sign::Positive,
            treat_as: Treatment::UndirectedUnweighted,
        }
    }

    pub fn weighted(self) -> Self {
        Self {
            treat_as: Treatment::UndirectedWeighted,
            ..self
        }
    }
}

/// Per-node scores with their population mean and standard deviation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub per_node: BTreeMap<String, f64>,
    pub mean: f64,
    pub std_dev: f64,
}

impl MetricReport {
    pub fn from_values(values: impl IntoIterator<Item = (String, f64)>) -> Self {
        let per_node: BTreeMap<String, f64> = values.into_iter().collect();
        let n = per_node.len() as f64;
        let (mean, std_dev) = if per_node.is_empty() {
            (0.0, 0.0)
        } else {
            let mean = per_node.values().sum::<f64>() / n;
            let var = per_node.values().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
            (mean, var.sqrt())
        };
        Self {
            per_node,
            mean,
            std_dev,
        }
    }

    pub fn get(&self, id: &str) -> Option<f64> {
        self.per_node.get(id).copied()
    }

    /// Entries sorted by value descending, then id ascending.
    pub fn ranked(&self) -> Vec<(&str, f64)> {
        let mut rows: Vec<(&str, f64)> =
            self.per_node.iter().map(|(k, v)| (k.as_str(), *v)).collect();
        rows.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        rows
    }

    pub fn top(&self, k: usize) -> Vec<&str> {
        self.ranked().into_iter().take(k).map(|(id, _)| id).collect()
    }

    /// `actor,value` rows in ranked order. With `footer`, two trailing rows
    /// hold the mean and standard deviation.
    pub fn to_csv(&self, footer: bool) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["actor", "value"]).expect("in-memory write");
        for (id, v) in self.ranked() {
            w.write_record([id, &v.to_string()]).expect("in-memory write");
        }
        if footer {
            w.write_record(["Mean", &self.mean.to_string()])
                .expect("in-memory write");
            w.write_record(["Std. Dev.", &self.std_dev.to_string()])
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 csv")
    }
}

/// One sign layer collapsed to an undirected graph over its participating
/// nodes.
#[derive(Debug, Clone)]
pub(crate) struct LayerGraph {
    pub ids: Vec<String>,
    /// `w[i][j] = layer[i][j] + layer[j][i]` over participating nodes.
    pub weights: SquareMatrix,
}

impl LayerGraph {
    pub fn new(g: &SignedDiGraph, sign: Sign) -> Self {
        let m = g.layer(sign);
        let n = g.len();
        let members: Vec<usize> = (0..n)
            .filter(|&i| (0..n).any(|j| m[(i, j)] > 0.0 || m[(j, i)] > 0.0))
            .collect();
        let weights = SquareMatrix::from_fn(members.len(), |a, b| {
            let (i, j) = (members[a], members[b]);
            if i == j {
                0.0
            } else {
                m[(i, j)] + m[(j, i)]
            }
        });
        let ids = members.iter().map(|&i| g.nodes()[i].id.clone()).collect();
        Self { ids, weights }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.weights[(i, j)] > 0.0
    }

    pub fn edge_value(&self, i: usize, j: usize, treat: Treatment) -> f64 {
        match treat {
            Treatment::UndirectedUnweighted if self.adjacent(i, j) => 1.0,
            Treatment::UndirectedUnweighted => 0.0,
            Treatment::UndirectedWeighted => self.weights[(i, j)],
        }
    }

    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        (0..self.len())
            .map(|i| (0..self.len()).filter(|&j| self.adjacent(i, j)).collect())
            .collect()
    }
}
