//! Signed directed actor graphs built from event records.
//!
//! Every incident contributes unit ties: alliances point from a helper to
//! the actor it helps (B→A, D→C) and attacks point from the attacking side
//! to the attacked side. Ties between the same ordered pair and sign are
//! summed into one weighted entry of the positive or negative layer, so a
//! pair can carry both signs in both directions at once.

mod io;
mod transform;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::{ActorCatalog, Category, EventRecord};
use crate::linalg::SquareMatrix;

pub use io::{GraphDocument, NodeDocument};
pub use transform::{directed_expand, symmetrize, SplitGraph, SplitRole};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("event {0} lacks an attacker or a target")]
    MissingPrincipal(String),

    #[error("coupling must be a positive finite number, got {0}")]
    InvalidCoupling(f64),

    #[error("schema_version {found:?} is not supported (expected {expected:?})")]
    SchemaVersion { found: String, expected: String },

    #[error("invalid graph document: {0}")]
    Document(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Positive,
    Negative,
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Positive => "positive",
            Sign::Negative => "negative",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tie {
    pub source: String,
    pub target: String,
    pub sign: Sign,
    pub weight: f64,
}

impl Tie {
    fn unit(source: &str, target: &str, sign: Sign) -> Self {
        Self {
            source: source.to_string(),
            target: target.to_string(),
            sign,
            weight: 1.0,
        }
    }
}

/// Which slots generate attack ties.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TieMode {
    /// Only the assisting attacker B attacks C.
    PaperLiteral,
    /// A and B attack both C and D.
    #[default]
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightScheme {
    #[default]
    IncidentCount,
    FatalityWeighted,
}

/// Ties generated by one incident, each with unit weight. Self-ties (an
/// actor appearing in two slots of the same event) are dropped.
pub fn extract_ties(event: &EventRecord, mode: TieMode) -> Result<Vec<Tie>, GraphError> {
    let a = event.actor_a.as_str();
    let c = event
        .actor_c
        .as_deref()
        .ok_or_else(|| GraphError::MissingPrincipal(event.id.clone()))?;
    let b = event.actor_b.as_deref();
    let d = event.actor_d.as_deref();

    let mut ties = Vec::new();
    if let Some(b) = b {
        ties.push(Tie::unit(b, a, Sign::Positive));
    }
    if let Some(d) = d {
        ties.push(Tie::unit(d, c, Sign::Positive));
    }
    match mode {
        TieMode::PaperLiteral => {
            if let Some(b) = b {
                ties.push(Tie::unit(b, c, Sign::Negative));
            }
        }
        TieMode::Full => {
            ties.push(Tie::unit(a, c, Sign::Negative));
            if let Some(b) = b {
                ties.push(Tie::unit(b, c, Sign::Negative));
            }
            if let Some(d) = d {
                ties.push(Tie::unit(a, d, Sign::Negative));
                if let Some(b) = b {
                    ties.push(Tie::unit(b, d, Sign::Negative));
                }
            }
        }
    }
    ties.retain(|t| t.source != t.target);
    // An actor listed twice in one row still contributes one tie per pair.
    let mut seen = std::collections::HashSet::new();
    ties.retain(|t| seen.insert((t.source.clone(), t.target.clone(), t.sign)));
    Ok(ties)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub id: String,
    pub category: Category,
    /// Catalog country tag, or else the most frequent country among the
    /// events in which the actor has a tie.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub country: Option<String>,
}

/// Nodes plus two non-negative weighted directed layers with zero
/// diagonals. `pos[(i, j)]` is the total positive weight from node `i` to
/// node `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedDiGraph {
    nodes: Vec<Node>,
    pos: SquareMatrix,
    neg: SquareMatrix,
}

impl SignedDiGraph {
    pub fn empty() -> Self {
        Self {
            nodes: Vec::new(),
            pos: SquareMatrix::zeros(0),
            neg: SquareMatrix::zeros(0),
        }
    }

    /// Builds a graph from explicit layers. Negative, non-finite and
    /// diagonal entries are rejected.
    pub fn from_layers(
        nodes: Vec<Node>,
        pos: SquareMatrix,
        neg: SquareMatrix,
    ) -> Result<Self, GraphError> {
        let n = nodes.len();
        if pos.dim() != n || neg.dim() != n {
            return Err(GraphError::Document(format!(
                "layer sizes {}/{} do not match {n} nodes",
                pos.dim(),
                neg.dim()
            )));
        }
        let mut seen = BTreeSet::new();
        for node in &nodes {
            if !seen.insert(node.id.as_str()) {
                return Err(GraphError::Document(format!("duplicate node {:?}", node.id)));
            }
        }
        for layer in [&pos, &neg] {
            for i in 0..n {
                for j in 0..n {
                    let w = layer[(i, j)];
                    if !w.is_finite() || w < 0.0 || (i == j && w != 0.0) {
                        return Err(GraphError::Document(format!(
                            "invalid weight {w} at ({i}, {j})"
                        )));
                    }
                }
            }
        }
        Ok(Self { nodes, pos, neg })
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn ids(&self) -> Vec<String> {
        self.nodes.iter().map(|n| n.id.clone()).collect()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.id == id)
    }

    pub fn positive(&self) -> &SquareMatrix {
        &self.pos
    }

    pub fn negative(&self) -> &SquareMatrix {
        &self.neg
    }

    pub fn layer(&self, sign: Sign) -> &SquareMatrix {
        match sign {
            Sign::Positive => &self.pos,
            Sign::Negative => &self.neg,
        }
    }

    pub fn weight(&self, source: &str, target: &str, sign: Sign) -> f64 {
        match (self.index_of(source), self.index_of(target)) {
            (Some(i), Some(j)) => self.layer(sign)[(i, j)],
            _ => 0.0,
        }
    }

    /// Number of non-zero directed entries in a layer.
    pub fn edge_count(&self, sign: Sign) -> usize {
        let m = self.layer(sign);
        let n = self.len();
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| m[(i, j)] > 0.0)
            .count()
    }

    /// Induced subgraph on the nodes for which `keep` returns true. Weights
    /// and relative node order are unchanged.
    pub fn subgraph(&self, keep: impl Fn(&Node) -> bool) -> SignedDiGraph {
        let kept: Vec<usize> = (0..self.len()).filter(|&i| keep(&self.nodes[i])).collect();
        SignedDiGraph {
            nodes: kept.iter().map(|&i| self.nodes[i].clone()).collect(),
            pos: self.pos.select(&kept),
            neg: self.neg.select(&kept),
        }
    }

    /// Same graph with nodes listed in `order` (indices into the current
    /// node list).
    pub fn permuted(&self, order: &[usize]) -> SignedDiGraph {
        assert_eq!(order.len(), self.len(), "permuted: order must cover every node");
        SignedDiGraph {
            nodes: order.iter().map(|&i| self.nodes[i].clone()).collect(),
            pos: self.pos.select(order),
            neg: self.neg.select(order),
        }
    }
}

/// Free-function form of [`SignedDiGraph::subgraph`].
pub fn subgraph(g: &SignedDiGraph, keep: impl Fn(&Node) -> bool) -> SignedDiGraph {
    g.subgraph(keep)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct BuildOptions {
    pub mode: TieMode,
    pub scheme: WeightScheme,
}

/// Aggregates the ties of every event into a signed directed graph.
///
/// Events without both an attacker and a target are skipped. Nodes are the
/// actors that appear in at least one tie, sorted by id, so the result does
/// not depend on event order.
pub fn build_graph(
    events: &[EventRecord],
    options: BuildOptions,
    catalog: &ActorCatalog,
) -> SignedDiGraph {
    let mut weights: BTreeMap<(String, String, Sign), f64> = BTreeMap::new();
    let mut countries: BTreeMap<String, BTreeMap<String, usize>> = BTreeMap::new();

    for event in events {
        let Ok(ties) = extract_ties(event, options.mode) else {
            continue;
        };
        let w = match options.scheme {
            WeightScheme::IncidentCount => 1.0,
            WeightScheme::FatalityWeighted => f64::from(event.fatalities),
        };
        for tie in ties {
            for actor in [&tie.source, &tie.target] {
                *countries
                    .entry(actor.clone())
                    .or_default()
                    .entry(event.country.clone())
                    .or_default() += 1;
            }
            *weights
                .entry((tie.source, tie.target, tie.sign))
                .or_default() += w * tie.weight;
        }
    }

    let nodes: Vec<Node> = countries
        .iter()
        .map(|(id, seen)| Node {
            id: id.clone(),
            category: catalog.category(id),
            country: catalog
                .country(id)
                .map(str::to_string)
                .or_else(|| most_frequent(seen)),
        })
        .collect();
    let index: BTreeMap<&str, usize> = nodes
        .iter()
        .enumerate()
        .map(|(i, n)| (n.id.as_str(), i))
        .collect();

    let n = nodes.len();
    let mut pos = SquareMatrix::zeros(n);
    let mut neg = SquareMatrix::zeros(n);
    for ((s, t, sign), w) in &weights {
        let (i, j) = (index[s.as_str()], index[t.as_str()]);
        match sign {
            Sign::Positive => pos[(i, j)] += w,
            Sign::Negative => neg[(i, j)] += w,
        }
    }
    SignedDiGraph { nodes, pos, neg }
}

fn most_frequent(seen: &BTreeMap<String, usize>) -> Option<String> {
    // BTreeMap iteration is alphabetical, so ties go to the first name.
    let mut best: Option<(&String, usize)> = None;
    for (country, &count) in seen {
        if country.is_empty() {
            continue;
        }
        if best.is_none_or(|(_, c)| count > c) {
            best = Some((country, count));
        }
    }
    best.map(|(c, _)| c.clone())
}
