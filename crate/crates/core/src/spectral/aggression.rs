use std::fmt;

use serde::{Deserialize, Serialize};

use super::embed::euclidean;
use super::{DirectedEmbedding, Embedding, SpectralError};
use crate::graph::{Sign, SignedDiGraph};

pub const DEFAULT_EPSILON: f64 = 1e-9;

/// Traffic-light aggression class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AggressionClass {
    /// Generates more aggression than it receives.
    Red,
    /// Generates some aggression, but no more than it receives.
    Orange,
    /// Generates no aggression.
    Green,
}

impl AggressionClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            AggressionClass::Red => "red",
            AggressionClass::Orange => "orange",
            AggressionClass::Green => "green",
        }
    }
}

impl fmt::Display for AggressionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggressionScore {
    pub actor: String,
    pub outaggression: f64,
    pub inaggression: f64,
    /// `outaggression - inaggression`.
    pub net: f64,
    pub class: AggressionClass,
}

impl AggressionScore {
    pub fn new(actor: impl Into<String>, outaggression: f64, inaggression: f64) -> Self {
        let mut score = Self {
            actor: actor.into(),
            outaggression,
            inaggression,
            net: outaggression - inaggression,
            class: AggressionClass::Green,
        };
        score.class = classify(&score, DEFAULT_EPSILON);
        score
    }
}

/// Green when outaggression is at most `epsilon`, red when it is positive
/// and the net exceeds `epsilon`, orange otherwise.
pub fn classify(score: &AggressionScore, epsilon: f64) -> AggressionClass {
    if score.outaggression <= epsilon {
        AggressionClass::Green
    } else if score.net > epsilon {
        AggressionClass::Red
    } else {
        AggressionClass::Orange
    }
}

fn mean(lengths: &[(f64, f64)], weighted: bool) -> f64 {
    if lengths.is_empty() {
        return 0.0;
    }
    if weighted {
        let total: f64 = lengths.iter().map(|(_, w)| w).sum();
        lengths.iter().map(|(d, w)| d * w).sum::<f64>() / total
    } else {
        lengths.iter().map(|(d, _)| d).sum::<f64>() / lengths.len() as f64
    }
}

fn scores_from(
    g: &SignedDiGraph,
    weighted: bool,
    tie_length: impl Fn(usize, usize) -> Result<f64, SpectralError>,
) -> Result<Vec<AggressionScore>, SpectralError> {
    let neg = g.layer(Sign::Negative);
    let n = g.len();
    let mut outgoing: Vec<Vec<(f64, f64)>> = vec![Vec::new(); n];
    let mut incoming: Vec<Vec<(f64, f64)>> = vec![Vec::new(); n];
    for u in 0..n {
        for v in 0..n {
            let w = neg[(u, v)];
            if w > 0.0 {
                let d = tie_length(u, v)?;
                outgoing[u].push((d, w));
                incoming[v].push((d, w));
            }
        }
    }
    Ok(g.nodes()
        .iter()
        .enumerate()
        .map(|(i, node)| {
            AggressionScore::new(
                node.id.clone(),
                mean(&outgoing[i], weighted),
                mean(&incoming[i], weighted),
            )
        })
        .collect())
}

/// Aggression of every node of `g` from the embedded lengths of its attack
/// ties. With `weighted`, ties count in proportion to their weight.
pub fn aggression_scores(
    emb: &Embedding,
    g: &SignedDiGraph,
    weighted: bool,
) -> Result<Vec<AggressionScore>, SpectralError> {
    let position = |i: usize| {
        let id = &g.nodes()[i].id;
        emb.position(id)
            .ok_or_else(|| SpectralError::MissingNode(id.clone()))
    };
    scores_from(g, weighted, |u, v| Ok(euclidean(position(u)?, position(v)?)))
}

/// As [`aggression_scores`], measuring each attack tie from the attacker's
/// outgoing role to the target's incoming role.
pub fn directed_aggression_scores(
    emb: &DirectedEmbedding,
    g: &SignedDiGraph,
    weighted: bool,
) -> Result<Vec<AggressionScore>, SpectralError> {
    scores_from(g, weighted, |u, v| {
        let (a, b) = (&g.nodes()[u].id, &g.nodes()[v].id);
        emb.tie_length(a, b)
            .ok_or_else(|| SpectralError::MissingNode(a.clone()))
    })
}
