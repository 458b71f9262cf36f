//! Dense symmetric matrices and a cyclic Jacobi eigen solver.
//!
//! Problem sizes here are small (at most a few dozen rows), so Jacobi's
//! O(n³) sweeps are cheap and give eigenvalues to full relative accuracy.

use alloc::vec;
use alloc::vec::Vec;

use crate::math::{abs, sqrt};
use crate::{Error, Result};

/// Row-major square matrix assumed symmetric by its users.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SymmetricMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymmetricMatrix {
    pub fn zeros(n: usize) -> Self {
        SymmetricMatrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    /// Builds the matrix from `f(i, j)` evaluated on the upper triangle.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in i..n {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m.set(i, i, v);
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    /// Sets both `(i, j)` and `(j, i)`.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.n + j] = value;
        self.data[j * self.n + i] = value;
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// `diag(s) · self · diag(s)`.
    pub fn scale_congruent(&self, s: &[f64]) -> Result<Self> {
        if s.len() != self.n {
            return Err(Error::LengthMismatch {
                left: s.len(),
                right: self.n,
            });
        }
        Ok(Self::from_fn(self.n, |i, j| s[i] * self.get(i, j) * s[j]))
    }

    /// Principal submatrix with row/column `index` removed.
    pub fn without(&self, index: usize) -> Self {
        let keep: Vec<usize> = (0..self.n).filter(|&i| i != index).collect();
        Self::from_fn(keep.len(), |i, j| self.get(keep[i], keep[j]))
    }

    /// Hadamard (entrywise) product.
    pub fn hadamard(&self, other: &Self) -> Result<Self> {
        if other.n != self.n {
            return Err(Error::LengthMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(Self::from_fn(self.n, |i, j| {
            self.get(i, j) * other.get(i, j)
        }))
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    fn off_diagonal_norm(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let v = self.get(i, j);
                s += v * v;
            }
        }
        sqrt(s)
    }
}

/// Eigen-decomposition `M = V diag(values) Vᵀ`, values ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigen {
    pub values: Vec<f64>,
    /// Column-major eigenvectors: `vectors[k]` belongs to `values[k]`.
    pub vectors: Vec<Vec<f64>>,
}

impl Eigen {
    /// A factor `L` with `L Lᵀ = M` built as `V diag(√max(λ, 0))`, returned
    /// row-major.
    pub fn sqrt_factor(&self) -> Vec<Vec<f64>> {
        let n = self.values.len();
        let mut rows = vec![vec![0.0; n]; n];
        for (k, (value, vector)) in self.values.iter().zip(&self.vectors).enumerate() {
            let s = sqrt(value.max(0.0));
            for i in 0..n {
                rows[i][k] = vector[i] * s;
            }
        }
        rows
    }
}

const MAX_SWEEPS: usize = 100;

/// Symmetric eigen-decomposition by cyclic Jacobi rotations.
pub fn symmetric_eigen(matrix: &SymmetricMatrix) -> Result<Eigen> {
    let n = matrix.dim();
    let mut a = matrix.clone();
    let mut v = SymmetricMatrixRows::identity(n);
    let scale = {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += a.get(i, j) * a.get(i, j);
            }
        }
        sqrt(s)
    };
    let mut converged = n < 2 || scale == 0.0;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                if apq == 0.0 {
                    continue;
                }
                let app = a.get(p, p);
                let aqq = a.get(q, q);
                let theta = (aqq - app) / (2.0 * apq);
                let t = {
                    let t = 1.0 / (abs(theta) + sqrt(theta * theta + 1.0));
                    if theta < 0.0 {
                        -t
                    } else {
                        t
                    }
                };
                let c = 1.0 / sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..n {
                    if k != p && k != q {
                        let akp = a.get(k, p);
                        let akq = a.get(k, q);
                        a.set(k, p, c * akp - s * akq);
                        a.set(k, q, s * akp + c * akq);
                    }
                }
                a.set(p, p, app - t * apq);
                a.set(q, q, aqq + t * apq);
                a.set(p, q, 0.0);
                v.rotate(p, q, c, s);
            }
        }
        converged = a.off_diagonal_norm() <= 1e-15 * scale;
    }
    if !converged {
        return Err(Error::Solver);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a.get(i, i).total_cmp(&a.get(j, j)));
    Ok(Eigen {
        values: order.iter().map(|&i| a.get(i, i)).collect(),
        vectors: order.iter().map(|&k| v.column(k)).collect(),
    })
}

/// Eigenvalues only, ascending.
pub fn symmetric_eigenvalues(matrix: &SymmetricMatrix) -> Result<Vec<f64>> {
    symmetric_eigen(matrix).map(|e| e.values)
}

// General (non-symmetric) row-major accumulator for the rotations.
struct SymmetricMatrixRows {
    n: usize,
    data: Vec<f64>,
}

impl SymmetricMatrixRows {
    fn identity(n: usize) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        SymmetricMatrixRows { n, data }
    }

    fn rotate(&mut self, p: usize, q: usize, c: f64, s: f64) {
        for k in 0..self.n {
            let vkp = self.data[k * self.n + p];
            let vkq = self.data[k * self.n + q];
            self.data[k * self.n + p] = c * vkp - s * vkq;
            self.data[k * self.n + q] = s * vkp + c * vkq;
        }
    }

    fn column(&self, k: usize) -> Vec<f64> {
        (0..self.n).map(|i| self.data[i * self.n + k]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two_by_hand() {
        let m = SymmetricMatrix::from_fn(2, |i, j| if i == j { 1.0 } else { 0.5 });
        let e = symmetric_eigen(&m).unwrap();
        assert!((e.values[0] - 0.5).abs() < 1e-15);
        assert!((e.values[1] - 1.5).abs() < 1e-15);
    }

    #[test]
    fn reconstructs_matrix() {
        let m = SymmetricMatrix::from_fn(5, |i, j| 1.0 / (1.0 + i as f64 + j as f64));
        let e = symmetric_eigen(&m).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                let r: f64 = (0..5)
                    .map(|k| e.vectors[k][i] * e.values[k] * e.vectors[k][j])
                    .sum();
                assert!((r - m.get(i, j)).abs() < 1e-13);
            }
        }
        let l = e.sqrt_factor();
        for i in 0..5 {
            for j in 0..5 {
                let r: f64 = (0..5).map(|k| l[i][k] * l[j][k]).sum();
                assert!((r - m.get(i, j)).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn diagonal_is_fixed_point() {
        let m = SymmetricMatrix::diagonal(&[3.0, 1.0, 2.0]);
        assert_eq!(symmetric_eigenvalues(&m).unwrap(), vec![1.0, 2.0, 3.0]);
    }
}
