use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{LayerGraph, LayerView, MetricsError};
use crate::graph::SignedDiGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EiOptions {
    pub permutations: usize,
    pub seed: u64,
    /// Worker threads for the permutation loop; 0 uses the global pool.
    #[serde(default)]
    pub workers: usize,
}

impl Default for EiOptions {
    fn default() -> Self {
        Self {
            permutations: 10_000,
            seed: 0,
            workers: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EIResult {
    pub index: f64,
    /// Share of label permutations whose index is at least the observed one.
    pub p_value: f64,
    pub permutations: usize,
    pub seed: u64,
    pub external: f64,
    pub internal: f64,
}

/// Krackhardt–Stern E/I index over the layer's dyads using each node's
/// category, with a label-permutation significance test.
pub fn ei_index(
    g: &SignedDiGraph,
    view: LayerView,
    options: EiOptions,
) -> Result<EIResult, MetricsError> {
    let labels: Vec<_> = g.nodes().iter().map(|n| n.category).collect();
    ei_index_with_labels(g, view, &labels, options)
}

/// As [`ei_index`] with explicit labels, one per node of `g`.
///
/// The null distribution shuffles labels among the layer's participating
/// nodes while the ties stay fixed. Permutation `i` draws from ChaCha8
/// stream `i` of `seed`, so the p-value does not depend on the number of
/// workers.
pub fn ei_index_with_labels<L>(
    g: &SignedDiGraph,
    view: LayerView,
    labels: &[L],
    options: EiOptions,
) -> Result<EIResult, MetricsError>
where
    L: PartialEq + Clone + Send + Sync,
{
    if labels.len() != g.len() {
        return Err(MetricsError::LabelCount {
            labels: labels.len(),
            nodes: g.len(),
        });
    }
    if options.permutations == 0 {
        return Err(MetricsError::NoPermutations);
    }
    let layer = LayerGraph::new(g, view.which);
    let n = layer.len();
    let dyads: Vec<(usize, usize, f64)> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .filter(|&(i, j)| layer.adjacent(i, j))
        .map(|(i, j)| (i, j, layer.edge_value(i, j, view.treat_as)))
        .collect();
    if dyads.is_empty() {
        return Err(MetricsError::NoTies);
    }

    let member_labels: Vec<L> = layer
        .ids
        .iter()
        .map(|id| labels[g.index_of(id).expect("layer ids come from g")].clone())
        .collect();
    let split = |lab: &[L]| {
        let (mut e, mut i) = (0.0, 0.0);
        for &(a, b, w) in &dyads {
            if lab[a] == lab[b] {
                i += w;
            } else {
                e += w;
            }
        }
        (e, i)
    };
    let index_of = |(e, i): (f64, f64)| (e - i) / (e + i);

    let (external, internal) = split(&member_labels);
    let observed = index_of((external, internal));

    let exceeds = |k: usize| {
        let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
        rng.set_stream(k as u64);
        let mut shuffled = member_labels.clone();
        shuffled.shuffle(&mut rng);
        index_of(split(&shuffled)) >= observed - 1e-12
    };
    let hits = if options.workers == 0 {
        (0..options.permutations).into_par_iter().filter(|&k| exceeds(k)).count()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(options.workers)
            .build()
            .map_err(|e| MetricsError::Workers(e.to_string()))?
            .install(|| (0..options.permutations).into_par_iter().filter(|&k| exceeds(k)).count())
    };

    Ok(EIResult {
        index: observed,
        p_value: hits as f64 / options.permutations as f64,
        permutations: options.permutations,
        seed: options.seed,
        external,
        internal,
    })
}
