//! Closed-form downlink coverage probability.
//!
//! For a user law Gamma(m, 1/m) and interference `I = Σ λ_i G_i` with
//! independent `G_i ~ Gamma(b_i, 1)`, the coverage `P(g r^{−α} > T I)` is
//!
//! ```text
//! Γ(B+m) / (Γ(B+1) Γ(m)) · Π x_i^{b_i} · F_D[1−m; b; B+1; x],
//! x_i = 1 / (T r^α m λ_i + 1),  B = Σ b_i.
//! ```
//!
//! Correlated interferers use the eigenvalues of `DC` as the weights. When
//! `m = 1` this is the product `Π x_i^{b_i}`; when `m` is an integer the
//! series terminates. Otherwise slow series fall back to the equivalent
//! integral `sin(πm)/π ∫₀¹ (1−s)^{−m} s^{B+m−1} Π (v_i+s)^{−b_i} ds`,
//! `v_i = T r^α m λ_i`, taken as a finite part when `m > 1`.

use alloc::vec::Vec;

use crate::math::{exp, ln_gamma, log1p, pow, sin, PI};
use crate::special::{
    euler_integral, expand_fd_terms, is_nonpositive_integer, lauricella_fd, monomial_symmetric,
    LauricellaArgs, TruncationPolicy,
};
use crate::{Error, Result};

/// Slack allowed outside `[0, 1]` before a result is called unstable.
pub const PROBABILITY_SLACK: f64 = 1e-9;
/// Weights below this fraction of the largest are dropped; they carry no
/// interference.
pub const NEGLIGIBLE_WEIGHT: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Variant {
    NakagamiIndep,
    NakagamiCorr,
    EtaMuIndep,
    EtaMuCorr,
}

impl Variant {
    pub fn is_correlated(&self) -> bool {
        matches!(self, Variant::NakagamiCorr | Variant::EtaMuCorr)
    }

    pub fn is_eta_mu(&self) -> bool {
        matches!(self, Variant::EtaMuIndep | Variant::EtaMuCorr)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Variant::NakagamiIndep => "nakagami_indep",
            Variant::NakagamiCorr => "nakagami_corr",
            Variant::EtaMuIndep => "eta_mu_indep",
            Variant::EtaMuCorr => "eta_mu_corr",
        }
    }
}

/// Interferer gamma shapes: one value for all, or one per weight
/// (independent Nakagami only).
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum InterfererShape {
    Common(f64),
    PerInterferer(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CoverageQuery {
    /// User fading shape.
    pub m: f64,
    /// Linear SIR threshold.
    pub t: f64,
    /// Distance to the serving site.
    pub r: f64,
    pub alpha: f64,
    /// `λ_i` (independent) or eigenvalues `λ̂_i` (correlated).
    pub weights: Vec<f64>,
    pub interferer_shape: InterfererShape,
    pub variant: Variant,
}

impl CoverageQuery {
    fn validate(&self) -> Result<()> {
        if !(self.m > 0.0 && self.m.is_finite()) {
            return Err(Error::Domain("user shape m must be positive"));
        }
        if !(self.t > 0.0 && self.t.is_finite()) {
            return Err(Error::Domain("threshold must be positive"));
        }
        if !(self.r > 0.0 && self.r.is_finite()) {
            return Err(Error::Domain("user distance must be positive"));
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::Domain("path-loss exponent must be positive"));
        }
        if self.weights.iter().any(|&w| !(w >= 0.0 && w.is_finite())) {
            return Err(Error::Domain("weights must be nonnegative and finite"));
        }
        if self.variant.is_eta_mu() && !self.weights.len().is_multiple_of(2) {
            return Err(Error::InvalidArgument("eta-mu variants need 2N weights"));
        }
        match &self.interferer_shape {
            InterfererShape::Common(s) if !(*s > 0.0 && s.is_finite()) => {
                Err(Error::Domain("interferer shape must be positive"))
            }
            InterfererShape::PerInterferer(v) => {
                if self.variant != Variant::NakagamiIndep {
                    return Err(Error::InvalidArgument(
                        "per-interferer shapes are only defined for independent nakagami",
                    ));
                }
                if v.len() != self.weights.len() {
                    return Err(Error::LengthMismatch {
                        left: v.len(),
                        right: self.weights.len(),
                    });
                }
                if v.iter().any(|&s| !(s > 0.0 && s.is_finite())) {
                    return Err(Error::Domain("interferer shape must be positive"));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// `(b_i, λ_i)` pairs with negligible weights removed.
    fn active_terms(&self) -> (Vec<f64>, Vec<f64>) {
        let max = self.weights.iter().fold(0.0_f64, |a, &b| a.max(b));
        let mut shapes = Vec::with_capacity(self.weights.len());
        let mut weights = Vec::with_capacity(self.weights.len());
        for (i, &w) in self.weights.iter().enumerate() {
            if w > NEGLIGIBLE_WEIGHT * max {
                shapes.push(match &self.interferer_shape {
                    InterfererShape::Common(s) => *s,
                    InterfererShape::PerInterferer(v) => v[i],
                });
                weights.push(w);
            }
        }
        (shapes, weights)
    }

    /// `T r^α m`, the factor turning weights into `v_i`.
    fn load(&self) -> f64 {
        self.t * pow(self.r, self.alpha) * self.m
    }

    /// The `F_D` arguments `x_i = 1/(T r^α m λ_i + 1)`.
    pub fn lauricella_x(&self) -> Vec<f64> {
        let k = self.load();
        self.weights.iter().map(|&w| 1.0 / (k * w + 1.0)).collect()
    }
}

/// `Π (1/(T r^α λ_i + 1))^shape`.
pub fn rayleigh_coverage(t: f64, r: f64, alpha: f64, weights: &[f64], shape: f64) -> f64 {
    let k = t * pow(r, alpha);
    exp(-shape * weights.iter().map(|&w| log1p(k * w)).sum::<f64>())
}

/// Coverage probability for any of the four variants.
pub fn coverage_probability(q: &CoverageQuery) -> Result<f64> {
    q.validate()?;
    let (b, weights) = q.active_terms();
    if weights.is_empty() {
        return Ok(1.0);
    }
    let load = q.load();
    let v: Vec<f64> = weights.iter().map(|&w| load * w).collect();
    let m = q.m;
    let value = if m == 1.0 {
        exp(-b
            .iter()
            .zip(&v)
            .map(|(&bi, &vi)| bi * log1p(vi))
            .sum::<f64>())
    } else {
        let x: Vec<f64> = v.iter().map(|&vi| 1.0 / (vi + 1.0)).collect();
        let big_b: f64 = b.iter().sum();
        let a = 1.0 - m;
        let c = big_b + 1.0;
        let log_front = ln_gamma(big_b + m)
            - ln_gamma(big_b + 1.0)
            - ln_gamma(m)
            - b.iter()
                .zip(&v)
                .map(|(&bi, &vi)| bi * log1p(vi))
                .sum::<f64>();
        let args = LauricellaArgs::new(a, b.clone(), c, x)?;
        let series = if is_nonpositive_integer(a) {
            lauricella_fd(&args, &TruncationPolicy::default())
        } else {
            match lauricella_fd(&args, &TruncationPolicy::default()) {
                Err(Error::BudgetExceeded { .. }) => {
                    let integral = euler_integral(a, c, &b, &v)?;
                    return finish(sin(PI * m) / PI * integral);
                }
                other => other,
            }
        }?;
        exp(log_front) * series
    };
    finish(value)
}

fn finish(value: f64) -> Result<f64> {
    if !(-PROBABILITY_SLACK..=1.0 + PROBABILITY_SLACK).contains(&value) {
        return Err(Error::NumericalInstability { value });
    }
    Ok(value.clamp(0.0, 1.0))
}

/// Which side of a term-group comparison is larger.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Side {
    Independent,
    Correlated,
    Tie,
}

/// One term group `K_{i,j} · m_λ(x)` evaluated on both sides.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GroupComparison {
    pub order: usize,
    pub index: usize,
    pub partition: Vec<usize>,
    pub pattern: alloc::string::String,
    pub coefficient: f64,
    /// −1, 0 or +1.
    pub sign: i8,
    /// `m_λ(x)` for the independent weights.
    pub independent: f64,
    /// `m_λ(x̂)` for the correlated eigenvalues.
    pub correlated: f64,
    /// Side with the larger contribution `K · m_λ`.
    pub dominant: Side,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ComparisonReport {
    pub m: f64,
    pub groups: Vec<GroupComparison>,
}

impl ComparisonReport {
    pub fn all_nonnegative(&self) -> bool {
        self.groups.iter().all(|g| g.coefficient >= 0.0)
    }

    /// Signs follow `(−1)^order` while `(1−m)_order ≠ 0`, and vanish after.
    pub fn alternates_by_order(&self) -> bool {
        let a = 1.0 - self.m;
        self.groups.iter().all(|g| {
            let head = crate::special::pochhammer(a, g.order as u32);
            if head == 0.0 {
                g.sign == 0
            } else if g.order % 2 == 1 {
                g.sign < 0
            } else {
                g.sign > 0
            }
        })
    }
}

/// Term-by-term comparison of the grouped `F_D` expansions for the
/// independent and correlated weights.
pub fn compare_appendix_series(
    q_indep: &CoverageQuery,
    q_corr: &CoverageQuery,
    max_order: usize,
) -> Result<ComparisonReport> {
    q_indep.validate()?;
    q_corr.validate()?;
    if q_indep.weights.len() != q_corr.weights.len() {
        return Err(Error::LengthMismatch {
            left: q_indep.weights.len(),
            right: q_corr.weights.len(),
        });
    }
    let b = match (&q_indep.interferer_shape, &q_corr.interferer_shape) {
        (InterfererShape::Common(a), InterfererShape::Common(b)) if a == b => *a,
        _ => {
            return Err(Error::InvalidArgument(
                "appendix comparison needs one common interferer shape",
            ))
        }
    };
    let n = q_indep.weights.len();
    let m = q_indep.m;
    let expansion = expand_fd_terms(1.0 - m, b, n as f64 * b + 1.0, n, max_order);
    let xi = q_indep.lauricella_x();
    let xc = q_corr.lauricella_x();
    let groups = expansion
        .groups
        .iter()
        .map(|g| {
            let independent = monomial_symmetric(&g.partition, &xi);
            let correlated = monomial_symmetric(&g.partition, &xc);
            let (ci, cc) = (g.coefficient * independent, g.coefficient * correlated);
            let dominant = if cc > ci {
                Side::Correlated
            } else if ci > cc {
                Side::Independent
            } else {
                Side::Tie
            };
            GroupComparison {
                order: g.order,
                index: g.index,
                partition: g.partition.clone(),
                pattern: g.pattern(),
                coefficient: g.coefficient,
                sign: if g.coefficient > 0.0 {
                    1
                } else if g.coefficient < 0.0 {
                    -1
                } else {
                    0
                },
                independent,
                correlated,
                dominant,
            }
        })
        .collect();
    Ok(ComparisonReport { m, groups })
}
