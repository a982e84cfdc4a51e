//! Dense square matrices and a cyclic Jacobi eigensolver for real symmetric
//! matrices.
//!
//! Graphs in this crate are a few hundred nodes at most, so everything is
//! stored densely in row-major order. The Jacobi method is slower than
//! tridiagonal QR but gives eigenvectors that are orthonormal to machine
//! precision and it is easy to make fully deterministic.

use std::fmt;
use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("matrix is not symmetric: |a[{row}][{col}] - a[{col}][{row}]| = {gap:e}")]
    NotSymmetric { row: usize, col: usize, gap: f64 },

    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {off:e})")]
    NoConvergence { sweeps: usize, off: f64 },
}

/// Row-major dense `n x n` matrix.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct SquareMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SquareMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Builds a matrix from nested rows. Panics if the rows are ragged.
    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            assert_eq!(row.len(), n, "from_rows: matrix must be square");
            data.extend_from_slice(row);
        }
        Self { n, data }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks(self.n.max(1)).take(self.n)
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.rows().map(<[f64]>::to_vec).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)])
    }

    /// Matrix restricted to the given rows and columns, in the given order.
    pub fn select(&self, keep: &[usize]) -> Self {
        Self::from_fn(keep.len(), |i, j| self[(keep[i], keep[j])])
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.n);
        self.rows()
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Largest `|a[i][j] - a[j][i]|` together with its position.
    pub fn asymmetry(&self) -> (f64, usize, usize) {
        let mut worst = (0.0, 0, 0);
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let gap = (self[(i, j)] - self[(j, i)]).abs();
                if gap > worst.0 {
                    worst = (gap, i, j);
                }
            }
        }
        worst
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.asymmetry().0 <= tol
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.n, other.n);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for SquareMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for SquareMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

impl fmt::Debug for SquareMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SquareMatrix({}x{})", self.n, self.n)?;
        for row in self.rows() {
            writeln!(f, "  {row:?}")?;
        }
        Ok(())
    }
}

/// Eigenpairs of a symmetric matrix, eigenvalues ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricEigen {
    pub eigenvalues: Vec<f64>,
    /// `vectors[j]` is the unit eigenvector belonging to `eigenvalues[j]`.
    pub vectors: Vec<Vec<f64>>,
}

impl SymmetricEigen {
    /// `||A x - lambda x||_2` for pair `j`.
    pub fn residual(&self, a: &SquareMatrix, j: usize) -> f64 {
        let x = &self.vectors[j];
        let ax = a.mul_vec(x);
        ax.iter()
            .zip(x)
            .map(|(ax_i, x_i)| (ax_i - self.eigenvalues[j] * x_i).powi(2))
            .sum::<f64>()
            .sqrt()
    }
}

pub const MAX_JACOBI_SWEEPS: usize = 100;

/// Symmetry tolerance relative to the largest entry.
const SYMMETRY_TOL: f64 = 1e-12;

/// Full eigendecomposition of a real symmetric matrix by cyclic Jacobi
/// rotations.
///
/// Eigenvalues are sorted ascending (ties keep their diagonal order) and each
/// eigenvector is flipped so its first entry larger than `1e-12` in magnitude
/// is positive.
pub fn symmetric_eigen(a: &SquareMatrix) -> Result<SymmetricEigen, LinalgError> {
    let n = a.dim();
    let scale = a.data.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    for i in 0..n {
        for j in 0..n {
            if !a[(i, j)].is_finite() {
                return Err(LinalgError::NonFinite { row: i, col: j });
            }
        }
    }
    let (gap, row, col) = a.asymmetry();
    if gap > SYMMETRY_TOL * scale.max(1.0) {
        return Err(LinalgError::NotSymmetric { row, col, gap });
    }

    let mut m = SquareMatrix::from_fn(n, |i, j| 0.5 * (a[(i, j)] + a[(j, i)]));
    let mut v = SquareMatrix::identity(n);
    let target = (f64::EPSILON * m.frobenius_norm()).powi(2);

    let mut converged = n < 2;
    let mut off = off_diagonal_sq(&m);
    for _ in 0..MAX_JACOBI_SWEEPS {
        if off <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
        off = off_diagonal_sq(&m);
    }
    if !converged && off > target {
        return Err(LinalgError::NoConvergence {
            sweeps: MAX_JACOBI_SWEEPS,
            off: off.sqrt(),
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].total_cmp(&m[(j, j)]).then(i.cmp(&j)));

    let eigenvalues = order.iter().map(|&i| m[(i, i)]).collect();
    let vectors = order
        .iter()
        .map(|&j| {
            let mut col: Vec<f64> = (0..n).map(|i| v[(i, j)]).collect();
            orient(&mut col);
            col
        })
        .collect();
    Ok(SymmetricEigen {
        eigenvalues,
        vectors,
    })
}

/// Flips `x` so its first entry with magnitude above `1e-12` is positive.
pub fn orient(x: &mut [f64]) {
    if let Some(first) = x.iter().find(|v| v.abs() > 1e-12) {
        if *first < 0.0 {
            x.iter_mut().for_each(|v| *v = -*v);
        }
    }
}

fn off_diagonal_sq(m: &SquareMatrix) -> f64 {
    let n = m.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += m[(i, j)] * m[(i, j)];
            }
        }
    }
    s
}

fn rotate(m: &mut SquareMatrix, v: &mut SquareMatrix, p: usize, q: usize) {
    let apq = m[(p, q)];
    if apq == 0.0 {
        return;
    }
    let app = m[(p, p)];
    let aqq = m[(q, q)];
    let theta = (aqq - app) / (2.0 * apq);
    let t = if theta.is_finite() && theta.abs() < 1e150 {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    } else {
        0.5 / theta
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let n = m.dim();

    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = m[(k, p)];
        let akq = m[(k, q)];
        let new_kp = c * akp - s * akq;
        let new_kq = s * akp + c * akq;
        m[(k, p)] = new_kp;
        m[(p, k)] = new_kp;
        m[(k, q)] = new_kq;
        m[(q, k)] = new_kq;
    }
    m[(p, p)] = app - t * apq;
    m[(q, q)] = aqq + t * apq;
    m[(p, q)] = 0.0;
    m[(q, p)] = 0.0;

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = c * vkp - s * vkq;
        v[(k, q)] = s * vkp + c * vkq;
    }
}
