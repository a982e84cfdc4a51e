use serde::{Deserialize, Serialize};

use super::{LayerGraph, LayerView, MetricsError};
use crate::graph::{Sign, SignedDiGraph};
use crate::linalg::SquareMatrix;

/// Share of the `n(n-1)/2` possible dyads that carry a tie in the layer.
pub fn density(g: &SignedDiGraph, view: LayerView) -> Result<f64, MetricsError> {
    let layer = LayerGraph::new(g, view.which);
    let n = layer.len();
    if n < 2 {
        return Err(MetricsError::DegenerateGraph { nodes: n, needed: 2 });
    }
    let dyads = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .filter(|&(i, j)| layer.adjacent(i, j))
        .count();
    Ok(dyads as f64 / (n * (n - 1) / 2) as f64)
}

/// Global transitivity: `3 × triangles / connected triples`. A layer with
/// no connected triple scores 0.
pub fn clustering_coefficient(g: &SignedDiGraph, view: LayerView) -> Result<f64, MetricsError> {
    let layer = LayerGraph::new(g, view.which);
    let n = layer.len();
    if n < 3 {
        return Err(MetricsError::DegenerateGraph { nodes: n, needed: 3 });
    }
    let neighbors = layer.neighbors();
    let mut closed = 0usize;
    let mut triples = 0usize;
    for nbrs in &neighbors {
        let d = nbrs.len();
        triples += d * d.saturating_sub(1) / 2;
        for (a, &u) in nbrs.iter().enumerate() {
            for &w in &nbrs[a + 1..] {
                if layer.adjacent(u, w) {
                    closed += 1;
                }
            }
        }
    }
    // `closed` counts every triangle once per vertex, i.e. 3 × triangles.
    Ok(if triples == 0 {
        0.0
    } else {
        closed as f64 / triples as f64
    })
}

/// How enemy-of-enemy two-paths close.
///
/// Every two-path `u – v – w` (`u < w`) whose two ties are negative is
/// classified by the `u – w` dyad: negative if any negative tie links them,
/// otherwise positive if a positive tie does, otherwise open. The closed
/// fractions are taken over closed two-paths; `open_fraction` is taken over
/// all two-paths. Fractions with an empty denominator are 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransitivityReport {
    pub closed_negative_fraction: f64,
    pub closed_positive_fraction: f64,
    pub open_fraction: f64,
    pub two_paths: usize,
    pub closed_negative: usize,
    pub closed_positive: usize,
    pub open: usize,
}

pub fn signed_transitivity(g: &SignedDiGraph) -> TransitivityReport {
    let n = g.len();
    let undirected = |m: &SquareMatrix| {
        SquareMatrix::from_fn(n, |i, j| if m[(i, j)] + m[(j, i)] > 0.0 { 1.0 } else { 0.0 })
    };
    let neg = undirected(g.layer(Sign::Negative));
    let pos = undirected(g.layer(Sign::Positive));

    let (mut closed_negative, mut closed_positive, mut open) = (0, 0, 0);
    for v in 0..n {
        let enemies: Vec<usize> = (0..n).filter(|&u| u != v && neg[(v, u)] > 0.0).collect();
        for (a, &u) in enemies.iter().enumerate() {
            for &w in &enemies[a + 1..] {
                if neg[(u, w)] > 0.0 {
                    closed_negative += 1;
                } else if pos[(u, w)] > 0.0 {
                    closed_positive += 1;
                } else {
                    open += 1;
                }
            }
        }
    }
    let two_paths = closed_negative + closed_positive + open;
    let closed = closed_negative + closed_positive;
    let frac = |num: usize, den: usize| if den == 0 { 0.0 } else { num as f64 / den as f64 };
    TransitivityReport {
        closed_negative_fraction: frac(closed_negative, closed),
        closed_positive_fraction: frac(closed_positive, closed),
        open_fraction: frac(open, two_paths),
        two_paths,
        closed_negative,
        closed_positive,
        open,
    }
}
