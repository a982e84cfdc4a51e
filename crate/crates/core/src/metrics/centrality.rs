use std::collections::VecDeque;

use super::{LayerGraph, LayerView, MetricReport, MetricsError};
use crate::graph::SignedDiGraph;

/// Distinct neighbours divided by `n - 1`. The weighted view uses the
/// summed tie weight instead of the neighbour count.
pub fn degree_centrality(g: &SignedDiGraph, view: LayerView) -> Result<MetricReport, MetricsError> {
    let layer = LayerGraph::new(g, view.which);
    let n = layer.len();
    if n < 2 {
        return Err(MetricsError::DegenerateGraph { nodes: n, needed: 2 });
    }
    let denom = (n - 1) as f64;
    Ok(MetricReport::from_values((0..n).map(|i| {
        let total: f64 = (0..n).map(|j| layer.edge_value(i, j, view.treat_as)).sum();
        (layer.ids[i].clone(), total / denom)
    })))
}

/// Connected components of the layer, each as sorted member indices.
fn components(neighbors: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = neighbors.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &w in &neighbors[v] {
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                    queue.push_back(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Principal eigenvector of the layer's (absolute) adjacency, computed on
/// the largest connected component by power iteration. Nodes outside that
/// component score 0. Scores have unit Euclidean norm and are non-negative.
///
/// Equal-sized largest components are resolved in favour of the one holding
/// the lexicographically smallest actor id. Iteration runs on `A + I`, which
/// has the same eigenvectors as `A` but converges on bipartite components.
pub fn eigenvector_centrality(
    g: &SignedDiGraph,
    view: LayerView,
    tol: f64,
    max_iter: usize,
) -> Result<MetricReport, MetricsError> {
    let layer = LayerGraph::new(g, view.which);
    let n = layer.len();
    if n < 2 {
        return Err(MetricsError::DegenerateGraph { nodes: n, needed: 2 });
    }
    let comps = components(&layer.neighbors());
    let largest = comps
        .iter()
        .max_by(|a, b| {
            a.len().cmp(&b.len()).then_with(|| {
                let min_id = |c: &Vec<usize>| c.iter().map(|&i| &layer.ids[i]).min().cloned();
                min_id(b).cmp(&min_id(a))
            })
        })
        .expect("non-empty layer has a component");

    let m = largest.len();
    let adj: Vec<Vec<f64>> = largest
        .iter()
        .map(|&i| {
            largest
                .iter()
                .map(|&j| layer.edge_value(i, j, view.treat_as).abs())
                .collect()
        })
        .collect();
    let apply = |x: &[f64]| -> Vec<f64> {
        adj.iter()
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    };
    let normalize = |x: &mut Vec<f64>| {
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        x.iter_mut().for_each(|v| *v /= norm);
    };

    let mut x = vec![1.0 / (m as f64).sqrt(); m];
    let mut residual = f64::INFINITY;
    let mut converged = false;
    for _ in 0..max_iter {
        let ax = apply(&x);
        let mut next: Vec<f64> = ax.iter().zip(&x).map(|(a, b)| a + b).collect();
        normalize(&mut next);
        x = next;
        let ax = apply(&x);
        let lambda: f64 = ax.iter().zip(&x).map(|(a, b)| a * b).sum();
        residual = ax
            .iter()
            .zip(&x)
            .map(|(a, b)| (a - lambda * b).powi(2))
            .sum::<f64>()
            .sqrt();
        if residual <= tol {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(MetricsError::NoConvergence {
            iterations: max_iter,
            residual,
        });
    }

    let mut scores = vec![0.0; n];
    for (k, &i) in largest.iter().enumerate() {
        scores[i] = x[k].abs();
    }
    Ok(MetricReport::from_values(
        layer.ids.iter().cloned().zip(scores),
    ))
}

/// Shortest-path betweenness on the unweighted undirected layer, counting
/// every shortest path (Brandes dependency accumulation) and normalised by
/// `(n-1)(n-2)/2`. Layers with fewer than three nodes score 0 everywhere.
///
/// Betweenness is always topological; `view.treat_as` is ignored.
pub fn betweenness_centrality(
    g: &SignedDiGraph,
    view: LayerView,
) -> Result<MetricReport, MetricsError> {
    let layer = LayerGraph::new(g, view.which);
    let n = layer.len();
    if n == 0 {
        return Err(MetricsError::NoTies);
    }
    let neighbors = layer.neighbors();
    let mut bc = vec![0.0; n];

    for s in 0..n {
        let mut stack = Vec::with_capacity(n);
        let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut sigma = vec![0.0_f64; n];
        let mut dist = vec![usize::MAX; n];
        sigma[s] = 1.0;
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            stack.push(v);
            for &w in &neighbors[v] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
                if dist[w] == dist[v] + 1 {
                    sigma[w] += sigma[v];
                    preds[w].push(v);
                }
            }
        }
        let mut delta = vec![0.0; n];
        while let Some(w) = stack.pop() {
            for &v in &preds[w] {
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            }
            if w != s {
                bc[w] += delta[w];
            }
        }
    }

    let scale = if n > 2 {
        // Each unordered pair was visited from both ends.
        1.0 / ((n - 1) * (n - 2)) as f64
    } else {
        0.0
    };
    Ok(MetricReport::from_values(
        layer.ids.iter().cloned().zip(bc.into_iter().map(|b| b * scale)),
    ))
}
