//! Low-order expansion of `F_D` with a common `b`, grouped by the pattern of
//! exponents.
//!
//! With every `b_k` equal, the coefficient of `Π x_k^{i_k}` depends only on
//! the multiset of nonzero exponents, i.e. on an integer partition `λ` of the
//! total order. Each group is `K_λ · m_λ(x)` where `m_λ` is the monomial
//! symmetric polynomial.

use alloc::vec;
use alloc::vec::Vec;

use super::pochhammer;
use crate::{Error, Result};

/// Largest total order [`expand_fd_terms`] accepts.
pub const MAX_EXPANSION_ORDER: usize = 6;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TermGroup {
    /// Total order `i`.
    pub order: usize,
    /// Position `j` (1-based) among the groups of this order.
    pub index: usize,
    /// Exponent pattern, nonincreasing.
    pub partition: Vec<usize>,
    pub coefficient: f64,
}

impl TermGroup {
    /// Human-readable pattern, e.g. `Σx_i^2 x_j`.
    pub fn pattern(&self) -> alloc::string::String {
        use core::fmt::Write;
        let mut s = alloc::string::String::from("Σ");
        const NAMES: [char; 6] = ['i', 'j', 'k', 'l', 'p', 'q'];
        for (slot, &e) in self.partition.iter().enumerate() {
            let _ = write!(s, "x_{}", NAMES[slot]);
            if e > 1 {
                let _ = write!(s, "^{e}");
            }
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TermGroupExpansion {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub n: usize,
    pub max_order: usize,
    pub groups: Vec<TermGroup>,
}

impl TermGroupExpansion {
    /// `1 + Σ K_λ m_λ(x)` over all groups.
    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.n {
            return Err(Error::LengthMismatch {
                left: x.len(),
                right: self.n,
            });
        }
        Ok(1.0
            + self
                .groups
                .iter()
                .map(|g| g.coefficient * monomial_symmetric(&g.partition, x))
                .sum::<f64>())
    }

    pub fn group(&self, order: usize, index: usize) -> Option<&TermGroup> {
        self.groups
            .iter()
            .find(|g| g.order == order && g.index == index)
    }
}

/// Groups `K_{i,j}` for total orders `1..=max_order` over `n` variables.
///
/// Within one order, groups are listed by number of parts, then by
/// decreasing largest part: `(2)`, `(1,1)`; `(3)`, `(2,1)`, `(1,1,1)`.
/// Patterns with more parts than variables are omitted.
///
/// # Panics
/// If `max_order` exceeds [`MAX_EXPANSION_ORDER`].
pub fn expand_fd_terms(a: f64, b: f64, c: f64, n: usize, max_order: usize) -> TermGroupExpansion {
    assert!(
        max_order <= MAX_EXPANSION_ORDER,
        "expansion order capped at {MAX_EXPANSION_ORDER}"
    );
    let mut groups = Vec::new();
    for order in 1..=max_order {
        let mut parts = partitions(order);
        parts.retain(|p| p.len() <= n);
        parts.sort_by(|p, q| p.len().cmp(&q.len()).then_with(|| q.cmp(p)));
        let head = pochhammer(a, order as u32) / pochhammer(c, order as u32);
        for (j, partition) in parts.into_iter().enumerate() {
            let tail: f64 = partition
                .iter()
                .map(|&e| pochhammer(b, e as u32) / factorial(e))
                .product();
            groups.push(TermGroup {
                order,
                index: j + 1,
                partition,
                coefficient: head * tail,
            });
        }
    }
    TermGroupExpansion {
        a,
        b,
        c,
        n,
        max_order,
        groups,
    }
}

/// Monomial symmetric polynomial `m_λ(x)`: the sum of all distinct
/// monomials whose exponent multiset is `partition`.
pub fn monomial_symmetric(partition: &[usize], x: &[f64]) -> f64 {
    // Distinct part values with their multiplicities.
    let mut values: Vec<usize> = Vec::new();
    let mut counts: Vec<usize> = Vec::new();
    for &p in partition.iter().filter(|&&p| p > 0) {
        match values.iter().position(|&v| v == p) {
            Some(k) => counts[k] += 1,
            None => {
                values.push(p);
                counts.push(1);
            }
        }
    }
    // Mixed-radix state: remaining multiplicity of each distinct value.
    let radix: Vec<usize> = counts.iter().map(|c| c + 1).collect();
    let states: usize = radix.iter().product();
    let encode = |rem: &[usize]| -> usize {
        rem.iter()
            .zip(&radix)
            .rev()
            .fold(0, |acc, (&r, &base)| acc * base + r)
    };
    let decode = |mut code: usize| -> Vec<usize> {
        radix
            .iter()
            .map(|&base| {
                let r = code % base;
                code /= base;
                r
            })
            .collect()
    };
    let mut dp = vec![0.0; states];
    dp[encode(&counts)] = 1.0;
    for &xv in x {
        let mut next = dp.clone();
        for (code, &weight) in dp.iter().enumerate() {
            if weight == 0.0 {
                continue;
            }
            let rem = decode(code);
            for k in 0..values.len() {
                if rem[k] > 0 {
                    let mut r = rem.clone();
                    r[k] -= 1;
                    next[encode(&r)] += weight * crate::math::pow(xv, values[k] as f64);
                }
            }
        }
        dp = next;
    }
    dp[0]
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(remaining: usize, cap: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if remaining == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=remaining.min(cap)).rev() {
            prefix.push(part);
            go(remaining - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut vec![], &mut out);
    out
}
