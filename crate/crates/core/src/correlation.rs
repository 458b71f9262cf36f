//! Interferer correlation matrices, the spectrum of `A = DC`, and
//! majorization predicates.

use alloc::vec::Vec;

use crate::linalg::{symmetric_eigenvalues, SymmetricMatrix};
use crate::math::{abs, ln, pow, sqrt};
use crate::random::RandomStream;
use crate::{Error, Result};

/// Eigenvalues down to this (negative) level are treated as rounding noise.
pub const PSD_TOLERANCE: f64 = -1e-10;
/// Relative slack for trace equality and majorization partial sums.
pub const MAJORIZATION_TOLERANCE: f64 = 1e-9;

/// Layout of a correlation matrix over interferer indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum CorrelationStructure {
    /// Entry `(p, q)` is `√(ρ^{|p−q|})`.
    Full,
    /// Two interleaved components per interferer (η-µ); rows `2p` and
    /// `2p+1` belong to interferer `p`, and entries with `i + j` odd vanish.
    EtaMuInterleaved,
    /// `copies` interleaved, mutually uncorrelated rows per interferer.
    /// `Blocked { copies: 2 }` is the same as `EtaMuInterleaved`.
    Blocked { copies: usize },
}

impl CorrelationStructure {
    pub fn copies(&self) -> usize {
        match *self {
            CorrelationStructure::Full => 1,
            CorrelationStructure::EtaMuInterleaved => 2,
            CorrelationStructure::Blocked { copies } => copies,
        }
    }
}

/// A validated, positive semidefinite correlation matrix.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CorrelationModel {
    pub n: usize,
    /// Base coefficient of the exponential model (`NaN` for custom lag
    /// functions).
    pub rho: f64,
    pub structure: CorrelationStructure,
    matrix: SymmetricMatrix,
    min_eigenvalue: f64,
}

impl CorrelationModel {
    /// Builds the matrix with `entry(i, j) = √(lag_rho(|p − q|))` where
    /// `p, q` are the interferers owning rows `i, j`, and zero between
    /// different copies.
    pub fn from_lag_fn(
        n: usize,
        structure: CorrelationStructure,
        mut lag_rho: impl FnMut(usize) -> f64,
    ) -> Result<Self> {
        let copies = structure.copies();
        if copies == 0 || !n.is_multiple_of(copies) {
            return Err(Error::InvalidArgument(
                "matrix size must be a multiple of the copies per interferer",
            ));
        }
        let mut by_lag = Vec::with_capacity(n / copies);
        for lag in 0..n / copies {
            let r = if lag == 0 { 1.0 } else { lag_rho(lag) };
            if !(0.0..=1.0).contains(&r) {
                return Err(Error::Domain("correlation out of range"));
            }
            by_lag.push(sqrt(r));
        }
        let matrix = SymmetricMatrix::from_fn(n, |i, j| {
            if i % copies != j % copies {
                0.0
            } else {
                let (p, q) = (i / copies, j / copies);
                by_lag[p.abs_diff(q)]
            }
        });
        Self::from_matrix(matrix, f64::NAN, structure)
    }

    /// Validates an arbitrary symmetric matrix with unit diagonal.
    pub fn from_matrix(
        matrix: SymmetricMatrix,
        rho: f64,
        structure: CorrelationStructure,
    ) -> Result<Self> {
        let n = matrix.dim();
        for i in 0..n {
            if abs(matrix.get(i, i) - 1.0) > 1e-12 {
                return Err(Error::Domain("correlation matrix needs a unit diagonal"));
            }
        }
        let min_eigenvalue = if n == 0 {
            0.0
        } else {
            symmetric_eigenvalues(&matrix)?[0]
        };
        if min_eigenvalue < PSD_TOLERANCE {
            return Err(Error::NotPsd { min_eigenvalue });
        }
        Ok(CorrelationModel {
            n,
            rho,
            structure,
            matrix,
            min_eigenvalue: min_eigenvalue.max(0.0),
        })
    }

    pub fn matrix(&self) -> &SymmetricMatrix {
        &self.matrix
    }

    /// Smallest eigenvalue, clipped at zero.
    pub fn min_eigenvalue(&self) -> f64 {
        self.min_eigenvalue
    }

    pub fn is_independent(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| i == j || self.matrix.get(i, j) == 0.0))
    }

    /// `C ⊗ I_copies`: each row becomes `copies` mutually uncorrelated rows
    /// that keep the original correlation with the matching copy of every
    /// other row.
    pub fn expand(&self, copies: usize) -> Result<Self> {
        if copies == 0 {
            return Err(Error::InvalidArgument("copies must be positive"));
        }
        if copies == 1 {
            return Ok(self.clone());
        }
        let matrix = SymmetricMatrix::from_fn(self.n * copies, |i, j| {
            if i % copies != j % copies {
                0.0
            } else {
                self.matrix.get(i / copies, j / copies)
            }
        });
        let structure = match self.structure {
            CorrelationStructure::Full => CorrelationStructure::Blocked { copies },
            other => CorrelationStructure::Blocked {
                copies: other.copies() * copies,
            },
        };
        Ok(CorrelationModel {
            n: self.n * copies,
            rho: self.rho,
            structure,
            matrix,
            min_eigenvalue: self.min_eigenvalue,
        })
    }

    /// The model with row/column `index` removed (a cancelled interferer).
    pub fn without(&self, index: usize) -> Result<Self> {
        if index >= self.n {
            return Err(Error::InvalidArgument("row index out of range"));
        }
        let matrix = self.matrix.without(index);
        let min_eigenvalue = if matrix.dim() == 0 {
            0.0
        } else {
            symmetric_eigenvalues(&matrix)?[0].max(0.0)
        };
        Ok(CorrelationModel {
            n: self.n - 1,
            rho: self.rho,
            structure: self.structure,
            matrix,
            min_eigenvalue,
        })
    }
}

/// Exponential correlation model with entries `√(ρ^{|p−q|})`.
pub fn build_correlation(
    n: usize,
    rho: f64,
    structure: CorrelationStructure,
) -> Result<CorrelationModel> {
    if !(0.0..=1.0).contains(&rho) {
        return Err(Error::Domain("correlation out of range"));
    }
    let mut model = CorrelationModel::from_lag_fn(n, structure, |lag| pow(rho, lag as f64))?;
    model.rho = rho;
    Ok(model)
}

/// Diagonal weights `λ` and the eigenvalues `λ̂` of `A = DC`, both ascending.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EigenSpectrum {
    pub lambdas: Vec<f64>,
    pub lambda_hats: Vec<f64>,
}

impl EigenSpectrum {
    /// `|Σλ − Σλ̂| / Σλ`.
    pub fn trace_gap(&self) -> f64 {
        let t: f64 = self.lambdas.iter().sum();
        let s: f64 = self.lambda_hats.iter().sum();
        abs(t - s) / abs(t).max(f64::MIN_POSITIVE)
    }

    /// `Π_{i≤j} λ_(i) ≥ Π_{i≤j} λ̂_(i)` for every `j`, products of the `j`
    /// smallest entries compared in log space.
    pub fn product_chain_holds(&self) -> bool {
        let mut log_l = 0.0;
        let mut log_h = 0.0;
        for (&l, &h) in self.lambdas.iter().zip(&self.lambda_hats) {
            if h <= 0.0 {
                return true;
            }
            log_l += ln(l);
            log_h += ln(h);
            if log_h > log_l + MAJORIZATION_TOLERANCE * (1.0 + abs(log_l)) {
                return false;
            }
        }
        true
    }

    /// `λ̂ ≻ λ`.
    pub fn hats_majorize(&self) -> bool {
        majorizes(&self.lambda_hats, &self.lambdas).unwrap_or(false)
    }
}

/// Spectrum of `A = DC` with `D = diag(weights)`, computed from the
/// symmetric similar matrix `D^{1/2} C D^{1/2}`.
pub fn weighted_spectrum(weights: &[f64], corr: &CorrelationModel) -> Result<EigenSpectrum> {
    if weights.len() != corr.n {
        return Err(Error::LengthMismatch {
            left: weights.len(),
            right: corr.n,
        });
    }
    if weights.iter().any(|&w| !(w > 0.0 && w.is_finite())) {
        return Err(Error::Domain("weights must be positive and finite"));
    }
    let roots: Vec<f64> = weights.iter().map(|&w| sqrt(w)).collect();
    let c = corr.matrix();
    let similar = SymmetricMatrix::from_fn(corr.n, |i, j| {
        if i == j {
            weights[i] * c.get(i, i)
        } else {
            roots[i] * c.get(i, j) * roots[j]
        }
    });
    let mut lambda_hats = symmetric_eigenvalues(&similar)?;
    for h in lambda_hats.iter_mut() {
        if *h < 0.0 {
            *h = 0.0;
        }
    }
    let mut lambdas = weights.to_vec();
    lambdas.sort_by(f64::total_cmp);
    Ok(EigenSpectrum {
        lambdas,
        lambda_hats,
    })
}

/// `true` when `a` majorizes `b`: after ascending sorts, every partial sum
/// of `b` is at least the matching partial sum of `a`, and the totals agree.
pub fn majorizes(a: &[f64], b: &[f64]) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let scale = a
        .iter()
        .chain(&b)
        .map(|v| abs(*v))
        .sum::<f64>()
        .max(f64::MIN_POSITIVE);
    let slack = MAJORIZATION_TOLERANCE * scale;
    let (mut sa, mut sb) = (0.0, 0.0);
    for k in 0..a.len() {
        sa += a[k];
        sb += b[k];
        if k + 1 < a.len() && sb < sa - slack {
            return Ok(false);
        }
    }
    Ok(abs(sa - sb) <= slack)
}

/// Outcome of a randomized Schur-convexity check.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WitnessReport {
    pub trials: usize,
    pub violations: usize,
    /// Largest `f(y) − f(x)` seen; nonpositive when no violation occurred.
    pub worst_gap: f64,
}

/// Random pair `(x, y)` with `x ≻ y`, `y` obtained from `x` by one to three
/// T-transforms.
pub fn random_majorization_pair(n: usize, rng: &mut RandomStream) -> (Vec<f64>, Vec<f64>) {
    let x: Vec<f64> = (0..n).map(|_| 2.0 * rng.uniform_open()).collect();
    let mut y = x.clone();
    if n >= 2 {
        for _ in 0..1 + rng.below(3) {
            let i = rng.below(n);
            let mut j = rng.below(n - 1);
            if j >= i {
                j += 1;
            }
            let t = rng.uniform();
            let (yi, yj) = (y[i], y[j]);
            y[i] = t * yi + (1.0 - t) * yj;
            y[j] = (1.0 - t) * yi + t * yj;
        }
    }
    (x, y)
}

/// Checks `Π (1/(1 + k x_i))^a ≥ Π (1/(1 + k y_i))^a` on `trials` random
/// pairs `x ≻ y`, allowing `1e−12` of slack.
pub fn is_schur_convex_witness(
    k: f64,
    a: f64,
    n: usize,
    trials: usize,
    rng: &mut RandomStream,
) -> WitnessReport {
    let f = |v: &[f64]| -> f64 {
        crate::math::exp(-a * v.iter().map(|&vi| crate::math::log1p(k * vi)).sum::<f64>())
    };
    let mut violations = 0;
    let mut worst_gap = f64::NEG_INFINITY;
    for _ in 0..trials {
        let (x, y) = random_majorization_pair(n, rng);
        let gap = f(&y) - f(&x);
        worst_gap = worst_gap.max(gap);
        if gap > 1e-12 {
            violations += 1;
        }
    }
    WitnessReport {
        trials,
        violations,
        worst_gap: if trials == 0 { 0.0 } else { worst_gap },
    }
}

/// Block-diagonal assembly of square blocks (used by tests and callers that
/// combine independent groups).
pub fn block_diagonal(blocks: &[&SymmetricMatrix]) -> SymmetricMatrix {
    let n: usize = blocks.iter().map(|b| b.dim()).sum();
    let mut m = SymmetricMatrix::zeros(n);
    let mut offset = 0;
    for b in blocks {
        for i in 0..b.dim() {
            for j in i..b.dim() {
                m.set(offset + i, offset + j, b.get(i, j));
            }
        }
        offset += b.dim();
    }
    m
}
