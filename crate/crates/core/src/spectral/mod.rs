//! Signed spectral embedding and aggression scores.
//!
//! The undirected signed matrix of a graph is turned into the signed
//! Laplacian `L = D̄ − W` (`D̄` holds absolute row sums), optionally
//! degree-normalised. Its low eigenvectors place allies close together and
//! enemies apart. Aggression is then read off the embedding: an actor's
//! outaggression is the mean embedded length of its outgoing attack ties,
//! its inaggression the same over incoming attack ties.

mod aggression;
mod embed;
mod laplacian;
mod plot;

use thiserror::Error;

use crate::linalg::LinalgError;

pub use aggression::{
    aggression_scores, classify, directed_aggression_scores, AggressionClass, AggressionScore,
    DEFAULT_EPSILON,
};
pub use embed::{embed, embed_directed, DirectedEmbedding, Embedding, EMBEDDING_RESIDUAL_TOL};
pub use laplacian::{signed_laplacian, SignedLaplacian};
pub use plot::{aggression_csv, embedding_csv, render_embedding_svg};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("signed matrix is not symmetric (gap {0:e})")]
    NotSymmetric(f64),

    #[error("signed matrix has a non-zero diagonal entry at {0}")]
    NonZeroDiagonal(usize),

    #[error("{ids} ids supplied for a {n}x{n} matrix")]
    IdCount { ids: usize, n: usize },

    #[error("no nodes left after removing isolates")]
    EmptyAfterIsolateRemoval,

    #[error("embedding dimension {k} not available for {n} nodes ({usable} usable eigenvectors)")]
    DimensionTooLarge { k: usize, n: usize, usable: usize },

    #[error("eigendecomposition failed: {0}")]
    EigFailure(String),

    #[error("actor {0:?} has attack ties but no embedded position")]
    MissingNode(String),

    #[error(transparent)]
    Graph(#[from] crate::graph::GraphError),
}

impl From<LinalgError> for SpectralError {
    fn from(e: LinalgError) -> Self {
        SpectralError::EigFailure(e.to_string())
    }
}
