use serde::{Deserialize, Serialize};

use super::{signed_laplacian, SignedLaplacian, SpectralError};
use crate::graph::{directed_expand, SignedDiGraph, SplitRole};
use crate::linalg::symmetric_eigen;

/// Largest accepted `‖Lx − λx‖₂` for a reported eigenpair.
pub const EMBEDDING_RESIDUAL_TOL: f64 = 1e-8;

/// Relative spread below which an eigenvector counts as constant.
const CONSTANT_TOL: f64 = 1e-9;

/// Node coordinates taken from Laplacian eigenvectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Embedding {
    pub node_order: Vec<String>,
    /// One row of `k` coordinates per node, in `node_order`.
    pub coords: Vec<Vec<f64>>,
    /// Eigenvalues of the selected columns, ascending.
    pub eigenvalues: Vec<f64>,
    pub k: usize,
}

impl Embedding {
    pub fn len(&self) -> usize {
        self.node_order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.node_order.is_empty()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.node_order.iter().position(|n| n == id)
    }

    pub fn position(&self, id: &str) -> Option<&[f64]> {
        self.index_of(id).map(|i| self.coords[i].as_slice())
    }

    /// Column `j` of the coordinate matrix.
    pub fn column(&self, j: usize) -> Vec<f64> {
        self.coords.iter().map(|row| row[j]).collect()
    }

    pub fn distance(&self, a: &str, b: &str) -> Option<f64> {
        Some(euclidean(self.position(a)?, self.position(b)?))
    }
}

pub(crate) fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// Embeds the Laplacian's nodes using the eigenvectors of its `k` smallest
/// eigenvalues.
///
/// The trivial eigenvector of an all-positive connected component is skipped:
/// a column counts as trivial when it is constant after undoing the degree
/// scaling (`D̄^{-1/2} x` for the normalised Laplacian, `x` itself otherwise).
/// Columns are unit-norm with their first non-zero entry positive.
pub fn embed(l: &SignedLaplacian, k: usize) -> Result<Embedding, SpectralError> {
    let n = l.len();
    if k == 0 || k + 1 > n {
        return Err(SpectralError::DimensionTooLarge { k, n, usable: n.saturating_sub(1) });
    }
    let eig = symmetric_eigen(&l.matrix)?;

    let is_trivial = |x: &[f64]| {
        let y: Vec<f64> = if l.normalized {
            x.iter().zip(&l.degrees).map(|(v, d)| v / d.sqrt()).collect()
        } else {
            x.to_vec()
        };
        let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        let (lo, hi) = y
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
        hi - lo < CONSTANT_TOL * norm
    };

    let usable: Vec<usize> = (0..n).filter(|&j| !is_trivial(&eig.vectors[j])).collect();
    if usable.len() < k {
        return Err(SpectralError::DimensionTooLarge {
            k,
            n,
            usable: usable.len(),
        });
    }
    let chosen = &usable[..k];
    for &j in chosen {
        let r = eig.residual(&l.matrix, j);
        if !(r <= EMBEDDING_RESIDUAL_TOL) {
            return Err(SpectralError::EigFailure(format!(
                "residual {r:e} for eigenvalue {} exceeds {EMBEDDING_RESIDUAL_TOL:e}",
                eig.eigenvalues[j]
            )));
        }
    }

    let coords = (0..n)
        .map(|i| chosen.iter().map(|&j| eig.vectors[j][i]).collect())
        .collect();
    Ok(Embedding {
        node_order: l.node_order.clone(),
        coords,
        eigenvalues: chosen.iter().map(|&j| eig.eigenvalues[j]).collect(),
        k,
    })
}

/// Embedding of the node-split expansion of a directed graph. Every actor
/// with ties has an outgoing-role and an incoming-role position.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectedEmbedding {
    pub embedding: Embedding,
    /// Actor and role of each row of `embedding`.
    pub roles: Vec<(String, SplitRole)>,
}

impl DirectedEmbedding {
    pub fn position(&self, id: &str, role: SplitRole) -> Option<&[f64]> {
        self.roles
            .iter()
            .position(|(a, r)| a == id && *r == role)
            .map(|i| self.embedding.coords[i].as_slice())
    }

    /// Distance from `source`'s outgoing role to `target`'s incoming role.
    pub fn tie_length(&self, source: &str, target: &str) -> Option<f64> {
        Some(euclidean(
            self.position(source, SplitRole::Out)?,
            self.position(target, SplitRole::In)?,
        ))
    }
}

/// `embed(signed_laplacian(directed_expand(g, coupling)), k)`.
pub fn embed_directed(
    g: &SignedDiGraph,
    k: usize,
    coupling: f64,
    normalized: bool,
) -> Result<DirectedEmbedding, SpectralError> {
    let split = directed_expand(g, coupling)?;
    let labels = split.label_strings();
    let l = signed_laplacian(&split.matrix, &labels, normalized)?;
    let embedding = embed(&l, k)?;
    let roles = embedding
        .node_order
        .iter()
        .map(|label| {
            let i = labels.iter().position(|l| l == label).expect("label from split graph");
            split.labels[i].clone()
        })
        .collect();
    Ok(DirectedEmbedding { embedding, roles })
}
