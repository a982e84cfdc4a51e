use serde::{Deserialize, Serialize};

use super::{GraphError, SignedDiGraph};
use crate::linalg::SquareMatrix;

/// Undirected signed matrix `W = (P + Pᵀ)/2 − (N + Nᵀ)/2`.
///
/// Opposite-sign interactions between the same pair cancel. Each entry is
/// computed from the same four terms in the same order for `(i, j)` and
/// `(j, i)`, so the result is exactly symmetric.
pub fn symmetrize(g: &SignedDiGraph) -> SquareMatrix {
    let (p, n) = (g.positive(), g.negative());
    SquareMatrix::from_fn(g.len(), |i, j| {
        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
        (p[(lo, hi)] + p[(hi, lo)]) / 2.0 - (n[(lo, hi)] + n[(hi, lo)]) / 2.0
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitRole {
    Out,
    In,
}

/// A node-split expansion: node `v` becomes `2v` (its outgoing role) and
/// `2v + 1` (its incoming role).
#[derive(Debug, Clone, PartialEq)]
pub struct SplitGraph {
    pub matrix: SquareMatrix,
    pub labels: Vec<(String, SplitRole)>,
}

impl SplitGraph {
    pub fn label_strings(&self) -> Vec<String> {
        self.labels
            .iter()
            .map(|(id, role)| split_label(id, *role))
            .collect()
    }
}

pub fn split_label(id: &str, role: SplitRole) -> String {
    match role {
        SplitRole::Out => format!("{id} [out]"),
        SplitRole::In => format!("{id} [in]"),
    }
}

/// Expands a directed signed graph into an undirected signed graph on `2n`
/// nodes.
///
/// A tie `u → v` with net signed weight `w = P[u][v] − N[u][v]` links
/// `u_out` with `v_in`. Each `v_out`–`v_in` pair is joined by a positive
/// edge of weight `coupling × Σ|w|` over all ties incident to `v`, so the two
/// roles of one actor stay in the same place unless its ties pull them
/// apart.
pub fn directed_expand(g: &SignedDiGraph, coupling: f64) -> Result<SplitGraph, GraphError> {
    if !(coupling.is_finite() && coupling > 0.0) {
        return Err(GraphError::InvalidCoupling(coupling));
    }
    let n = g.len();
    let (p, neg) = (g.positive(), g.negative());
    let net = |u: usize, v: usize| p[(u, v)] - neg[(u, v)];

    let mut m = SquareMatrix::zeros(2 * n);
    let mut degree = vec![0.0; n];
    for u in 0..n {
        for v in 0..n {
            if u == v {
                continue;
            }
            let w = net(u, v);
            if w != 0.0 {
                m[(2 * u, 2 * v + 1)] = w;
                m[(2 * v + 1, 2 * u)] = w;
                degree[u] += w.abs();
                degree[v] += w.abs();
            }
        }
    }
    for (v, d) in degree.iter().enumerate() {
        if *d > 0.0 {
            m[(2 * v, 2 * v + 1)] = coupling * d;
            m[(2 * v + 1, 2 * v)] = coupling * d;
        }
    }
    let labels = g
        .nodes()
        .iter()
        .flat_map(|node| [(node.id.clone(), SplitRole::Out), (node.id.clone(), SplitRole::In)])
        .collect();
    Ok(SplitGraph { matrix: m, labels })
}
