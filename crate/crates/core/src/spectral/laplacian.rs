use super::SpectralError;
use crate::linalg::SquareMatrix;

#[derive(Debug, Clone, PartialEq)]
pub struct SignedLaplacian {
    pub matrix: SquareMatrix,
    pub node_order: Vec<String>,
    pub normalized: bool,
    /// Absolute degrees `Σⱼ |Wᵢⱼ|` of the kept nodes.
    pub degrees: Vec<f64>,
    /// Ids removed because their absolute degree was zero.
    pub dropped: Vec<String>,
}

impl SignedLaplacian {
    pub fn len(&self) -> usize {
        self.node_order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.node_order.is_empty()
    }
}

/// Signed Laplacian `D̄ − W` of a symmetric signed matrix with zero
/// diagonal, or `D̄^{-1/2} (D̄ − W) D̄^{-1/2}` when `normalized`. Rows with
/// zero absolute degree are removed first.
pub fn signed_laplacian(
    w: &SquareMatrix,
    ids: &[String],
    normalized: bool,
) -> Result<SignedLaplacian, SpectralError> {
    let n = w.dim();
    if ids.len() != n {
        return Err(SpectralError::IdCount { ids: ids.len(), n });
    }
    let scale = (0..n)
        .flat_map(|i| w.row(i).iter())
        .fold(0.0_f64, |m, x| m.max(x.abs()));
    let (gap, _, _) = w.asymmetry();
    if gap > 1e-12 * scale.max(1.0) {
        return Err(SpectralError::NotSymmetric(gap));
    }
    if let Some(i) = (0..n).find(|&i| w[(i, i)] != 0.0) {
        return Err(SpectralError::NonZeroDiagonal(i));
    }

    let abs_degree: Vec<f64> = (0..n).map(|i| w.row(i).iter().map(|x| x.abs()).sum()).collect();
    let (kept, dropped): (Vec<usize>, Vec<usize>) = (0..n).partition(|&i| abs_degree[i] > 0.0);
    if kept.is_empty() {
        return Err(SpectralError::EmptyAfterIsolateRemoval);
    }
    let degrees: Vec<f64> = kept.iter().map(|&i| abs_degree[i]).collect();
    let sub = w.select(&kept);

    let matrix = SquareMatrix::from_fn(kept.len(), |i, j| {
        // Evaluate each unordered pair once so the result is exactly symmetric.
        let (a, b) = if i <= j { (i, j) } else { (j, i) };
        let raw = if a == b { degrees[a] } else { -sub[(a, b)] };
        if normalized {
            raw / (degrees[a].sqrt() * degrees[b].sqrt())
        } else {
            raw
        }
    });

    Ok(SignedLaplacian {
        matrix,
        node_order: kept.iter().map(|&i| ids[i].clone()).collect(),
        normalized,
        degrees,
        dropped: dropped.iter().map(|&i| ids[i].clone()).collect(),
    })
}
