use serde::{Deserialize, Serialize};

use crate::linalg::SquareMatrix;

/// Signed triangles of a symmetric signed matrix, grouped by how many of
/// their three edges are negative.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct TriadCensus {
    pub ppp: usize,
    pub ppn: usize,
    pub pnn: usize,
    pub nnn: usize,
    /// `(ppp + pnn) / total`, or 0 when there are no triangles.
    pub balanced_fraction: f64,
}

impl TriadCensus {
    pub fn total(&self) -> usize {
        self.ppp + self.ppn + self.pnn + self.nnn
    }

    pub fn balanced(&self) -> usize {
        self.ppp + self.pnn
    }
}

/// Counts fully connected triples (all three entries non-zero) of `w` by
/// their number of negative edges. Triangles with an even number of
/// negative edges are balanced.
pub fn triad_census(w: &SquareMatrix) -> TriadCensus {
    let n = w.dim();
    let mut census = TriadCensus::default();
    for i in 0..n {
        for j in (i + 1)..n {
            if w[(i, j)] == 0.0 {
                continue;
            }
            for k in (j + 1)..n {
                let edges = [w[(i, j)], w[(j, k)], w[(i, k)]];
                if edges.contains(&0.0) {
                    continue;
                }
                match edges.iter().filter(|&&e| e < 0.0).count() {
                    0 => census.ppp += 1,
                    1 => census.ppn += 1,
                    2 => census.pnn += 1,
                    _ => census.nnn += 1,
                }
            }
        }
    }
    let total = census.total();
    if total > 0 {
        census.balanced_fraction = census.balanced() as f64 / total as f64;
    }
    census
}
