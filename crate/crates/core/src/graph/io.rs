use serde::{Deserialize, Serialize};

use super::{GraphError, Node, SignedDiGraph};
use crate::ingest::Category;
use crate::linalg::SquareMatrix;
use crate::SCHEMA_VERSION;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeDocument {
    pub id: String,
    pub category: Category,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub country: Option<String>,
}

/// JSON form of a [`SignedDiGraph`]. Edge lists hold `[src_idx, dst_idx,
/// weight]` triples sorted by `(src, dst)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphDocument {
    pub schema_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config_digest: Option<String>,
    pub nodes: Vec<NodeDocument>,
    pub pos_edges: Vec<(usize, usize, f64)>,
    pub neg_edges: Vec<(usize, usize, f64)>,
}

fn edges(m: &SquareMatrix) -> Vec<(usize, usize, f64)> {
    let n = m.dim();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if m[(i, j)] != 0.0 {
                out.push((i, j, m[(i, j)]));
            }
        }
    }
    out
}

impl From<&SignedDiGraph> for GraphDocument {
    fn from(g: &SignedDiGraph) -> Self {
        GraphDocument {
            schema_version: SCHEMA_VERSION.to_string(),
            config_digest: None,
            nodes: g
                .nodes()
                .iter()
                .map(|n| NodeDocument {
                    id: n.id.clone(),
                    category: n.category,
                    country: n.country.clone(),
                })
                .collect(),
            pos_edges: edges(g.positive()),
            neg_edges: edges(g.negative()),
        }
    }
}

impl TryFrom<GraphDocument> for SignedDiGraph {
    type Error = GraphError;

    fn try_from(doc: GraphDocument) -> Result<Self, GraphError> {
        if doc.schema_version != SCHEMA_VERSION {
            return Err(GraphError::SchemaVersion {
                found: doc.schema_version,
                expected: SCHEMA_VERSION.to_string(),
            });
        }
        let n = doc.nodes.len();
        let fill = |list: &[(usize, usize, f64)]| -> Result<SquareMatrix, GraphError> {
            let mut m = SquareMatrix::zeros(n);
            for &(i, j, w) in list {
                if i >= n || j >= n {
                    return Err(GraphError::Document(format!(
                        "edge ({i}, {j}) refers to a missing node"
                    )));
                }
                m[(i, j)] += w;
            }
            Ok(m)
        };
        let pos = fill(&doc.pos_edges)?;
        let neg = fill(&doc.neg_edges)?;
        let nodes = doc
            .nodes
            .into_iter()
            .map(|n| Node {
                id: n.id,
                category: n.category,
                country: n.country,
            })
            .collect();
        SignedDiGraph::from_layers(nodes, pos, neg)
    }
}

impl SignedDiGraph {
    pub fn to_document(&self) -> GraphDocument {
        GraphDocument::from(self)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("graph serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        let doc: GraphDocument =
            serde_json::from_str(text).map_err(|e| GraphError::Document(e.to_string()))?;
        SignedDiGraph::try_from(doc)
    }
}
