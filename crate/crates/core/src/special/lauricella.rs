//! Lauricella `F_D` by total-degree summation, plus an Euler-integral route
//! (continued to negative non-integer `a`) for where the series converges
//! too slowly near `|x| = 1`.

use alloc::vec;
use alloc::vec::Vec;

use super::is_nonpositive_integer;
use crate::math::{abs, exp, expm1, ln, ln_gamma, log1p};
use crate::quadrature::{integrate, Tolerance};
use crate::{Error, Result};

/// Arguments of `F_D[a; b_1, …, b_N; c; x_1, …, x_N]`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LauricellaArgs {
    pub a: f64,
    pub b: Vec<f64>,
    pub c: f64,
    pub x: Vec<f64>,
}

impl LauricellaArgs {
    pub fn new(a: f64, b: Vec<f64>, c: f64, x: Vec<f64>) -> Result<Self> {
        if b.len() != x.len() {
            return Err(Error::LengthMismatch {
                left: b.len(),
                right: x.len(),
            });
        }
        if !(c > 0.0) {
            return Err(Error::Domain("lauricella parameter c must be positive"));
        }
        if !a.is_finite() || b.iter().chain(&x).any(|v| !v.is_finite()) {
            return Err(Error::Domain("lauricella arguments must be finite"));
        }
        Ok(LauricellaArgs { a, b, c, x })
    }

    pub fn max_abs_x(&self) -> f64 {
        self.x.iter().fold(0.0, |m, &v| m.max(abs(v)))
    }
}

/// Stopping rule for the non-terminating series.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TruncationPolicy {
    /// Degree contributions and the geometric tail estimate must both fall
    /// below this fraction of the partial sum.
    pub relative_tolerance: f64,
    /// Number of consecutive quiet degrees required to stop.
    pub quiet_degrees: usize,
    /// Hard limit on the total degree.
    pub max_degree: usize,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy {
            relative_tolerance: 1e-12,
            quiet_degrees: 2,
            max_degree: 200,
        }
    }
}

impl TruncationPolicy {
    pub fn with_max_degree(self, max_degree: usize) -> Self {
        TruncationPolicy { max_degree, ..self }
    }
}

// Degree-n coefficients of Π (1 − x_k t)^(−b_k) via n e_n = Σ_j p_j e_{n−j},
// p_j = Σ_k b_k x_k^j.
struct DegreeSums {
    b: Vec<f64>,
    x: Vec<f64>,
    powers: Vec<f64>,
    p: Vec<f64>,
    e: Vec<f64>,
}

impl DegreeSums {
    fn new(b: &[f64], x: &[f64]) -> Self {
        DegreeSums {
            b: b.to_vec(),
            x: x.to_vec(),
            powers: vec![1.0; x.len()],
            p: vec![0.0],
            e: vec![1.0],
        }
    }

    fn next(&mut self) -> f64 {
        let n = self.e.len();
        let mut pn = 0.0;
        for ((pw, &xk), &bk) in self.powers.iter_mut().zip(&self.x).zip(&self.b) {
            *pw *= xk;
            pn += bk * *pw;
        }
        self.p.push(pn);
        let mut s = 0.0;
        for j in 1..=n {
            s += self.p[j] * self.e[n - j];
        }
        let en = s / n as f64;
        self.e.push(en);
        en
    }
}

/// Series value of `F_D`.
///
/// A nonpositive integer `a` terminates the series at total degree `|a|`
/// and the sum is exact. Otherwise degrees are added until `policy` is
/// satisfied.
pub fn lauricella_fd(args: &LauricellaArgs, policy: &TruncationPolicy) -> Result<f64> {
    let max_abs_x = args.max_abs_x();
    if max_abs_x >= 1.0 {
        return Err(Error::NonConvergent { max_abs_x });
    }
    let (a, c) = (args.a, args.c);
    let mut sums = DegreeSums::new(&args.b, &args.x);
    let mut ratio = 1.0;
    let mut partial = 1.0;

    if is_nonpositive_integer(a) {
        let last = (-a) as usize;
        for n in 1..=last {
            ratio *= (a + (n - 1) as f64) / (c + (n - 1) as f64);
            partial += ratio * sums.next();
        }
        return Ok(partial);
    }

    let signed = args.b.iter().chain(&args.x).any(|&v| v < 0.0);
    let mut bound = if signed {
        let ab: Vec<f64> = args.b.iter().map(|v| abs(*v)).collect();
        let ax: Vec<f64> = args.x.iter().map(|v| abs(*v)).collect();
        Some(DegreeSums::new(&ab, &ax))
    } else {
        None
    };
    let tail_factor = max_abs_x / (1.0 - max_abs_x);
    let mut quiet = 0;
    let mut last_term = 0.0;
    for n in 1..=policy.max_degree {
        ratio *= (a + (n - 1) as f64) / (c + (n - 1) as f64);
        let en = sums.next();
        let term = ratio * en;
        let abs_term = match bound.as_mut() {
            Some(b) => abs(ratio) * b.next(),
            None => abs(term),
        };
        partial += term;
        last_term = term;
        let scale = policy.relative_tolerance * abs(partial);
        if abs_term <= scale && abs_term * tail_factor <= scale {
            quiet += 1;
            if quiet >= policy.quiet_degrees {
                return Ok(partial);
            }
        } else {
            quiet = 0;
        }
        if !partial.is_finite() {
            return Err(Error::NumericalInstability { value: partial });
        }
    }
    Err(Error::BudgetExceeded {
        degree: policy.max_degree,
        last_term,
    })
}

/// `F_D` through its Euler integral, valid for `0 < a < c` and
/// `0 ≤ x_i < 1`.
pub fn lauricella_fd_euler(args: &LauricellaArgs) -> Result<f64> {
    let (a, c) = (args.a, args.c);
    if !(a > 0.0 && c > a) {
        return Err(Error::Domain("euler integral needs 0 < a < c"));
    }
    if args.x.iter().any(|&v| !(0.0..1.0).contains(&v)) {
        return Err(Error::Domain("euler integral needs 0 <= x < 1"));
    }
    let mut b = Vec::new();
    let mut p = Vec::new();
    let mut q = Vec::new();
    for (&bk, &xk) in args.b.iter().zip(&args.x) {
        if xk > 0.0 {
            b.push(bk);
            p.push(1.0 - xk);
            q.push(xk);
        }
    }
    let integral = euler_core(a, c, &b, &p, &q)?;
    Ok(exp(ln_gamma(c) - ln_gamma(a) - ln_gamma(c - a)) * integral)
}

/// `∫₀¹ (1−s)^(a−1) s^(c−a−1) Π (v_i + s)^(−b_i) ds` for `c > a`,
/// `v_i > 0` and `a` not a non-positive integer.
///
/// For `a < 0` the integral diverges at `s = 1` and the value returned is
/// its analytic continuation in `a` (the Hadamard finite part).
pub fn euler_integral(a: f64, c: f64, b: &[f64], v: &[f64]) -> Result<f64> {
    if b.len() != v.len() {
        return Err(Error::LengthMismatch {
            left: b.len(),
            right: v.len(),
        });
    }
    if !(c > a) || is_nonpositive_integer(a) || !a.is_finite() {
        return Err(Error::Domain(
            "euler integral needs c > a and a not a non-positive integer",
        ));
    }
    if v.iter().any(|&vi| !(vi > 0.0)) {
        return Err(Error::Domain("euler integral needs positive offsets"));
    }
    if a > 0.0 {
        let q = vec![1.0; v.len()];
        return euler_core(a, c, b, v, &q);
    }
    continued_euler(a, c, b, v)
}

// Finite part for a < 0. On [1 − t0, 1] the regular factor
// h(s) = s^(c−a−1) Π (v_i + s)^(−b_i) is expanded in t = 1 − s and
// integrated term by term, each ∫₀^t0 t^(a+n−1) dt continued to
// t0^(a+n)/(a+n). The rest is an ordinary integral.
fn continued_euler(a: f64, c: f64, b: &[f64], v: &[f64]) -> Result<f64> {
    const MAX_TERMS: usize = 500;
    let ca = c - a;
    let t0 = (0.5 / ca).min(0.1);

    // ln h(1 − t) = ln h0 + Σ_j d_j t^j, then h = h0 Σ e_n t^n.
    let log_h0: f64 = -b
        .iter()
        .zip(v)
        .map(|(&bi, &vi)| bi * log1p(vi))
        .sum::<f64>();
    let inv: Vec<f64> = v.iter().map(|&vi| 1.0 / (1.0 + vi)).collect();
    let mut powers = inv.clone();
    let mut jd = vec![0.0]; // j d_j
    let mut e = vec![1.0];
    let mut sum = 0.0;
    let mut quiet = 0;
    for n in 0..MAX_TERMS {
        if n > 0 {
            let p: f64 = b.iter().zip(&powers).map(|(&bi, &pw)| bi * pw).sum();
            jd.push(p - (ca - 1.0));
            for (pw, &r) in powers.iter_mut().zip(&inv) {
                *pw *= r;
            }
            let en = (1..=n).map(|j| jd[j] * e[n - j]).sum::<f64>() / n as f64;
            e.push(en);
        }
        let term = e[n] * exp((a + n as f64) * ln(t0)) / (a + n as f64);
        sum += term;
        if a + (n as f64) > 0.0 && abs(term) <= 1e-17 * abs(sum) {
            quiet += 1;
            if quiet >= 2 {
                break;
            }
        } else {
            quiet = 0;
        }
        if n + 1 == MAX_TERMS {
            return Err(Error::BudgetExceeded {
                degree: MAX_TERMS,
                last_term: term,
            });
        }
    }
    let tail = exp(log_h0) * sum;

    let log_h = |s: f64| -> f64 {
        (ca - 1.0) * ln(s)
            - b.iter()
                .zip(v)
                .map(|(&bi, &vi)| bi * ln(vi + s))
                .sum::<f64>()
    };
    let tol = Tolerance {
        absolute: 0.0,
        relative: 1e-12,
        max_intervals: 4000,
    };
    let knee = v.iter().copied().fold(0.5_f64, f64::min);
    let lower = integrate(
        |y| {
            let s = exp(y);
            exp(y + (a - 1.0) * log1p(-s) + log_h(s))
        },
        ln(knee) - (60.0 / ca).min(700.0),
        ln(0.5),
        tol,
    );
    let middle = integrate(
        |s| exp((a - 1.0) * log1p(-s) + log_h(s)),
        0.5,
        1.0 - t0,
        tol,
    );
    let value = lower.value + middle.value + tail;
    let scale = abs(lower.value) + abs(middle.value) + abs(tail);
    if !value.is_finite() || lower.error + middle.error > 1e-10 * scale {
        return Err(Error::NumericalInstability { value });
    }
    Ok(value)
}

// ∫₀¹ (1−s)^(a−1) s^(c−a−1) Π (p_i + q_i s)^(−b_i) ds.
//
// [0, ½] is integrated in y = ln s, starting far enough below the smallest
// knee p_i/q_i that the omitted mass is below e^-60 of the integrand scale.
// [½, 1] uses w = (1−s)^a, which absorbs the endpoint singularity.
fn euler_core(a: f64, c: f64, b: &[f64], p: &[f64], q: &[f64]) -> Result<f64> {
    let ca = c - a;
    let log_product = |s: f64| -> f64 {
        let mut acc = 0.0;
        for ((&bi, &pi), &qi) in b.iter().zip(p).zip(q) {
            acc += bi * ln(pi + qi * s);
        }
        acc
    };
    let knee = p
        .iter()
        .zip(q)
        .map(|(&pi, &qi)| pi / qi)
        .fold(0.5_f64, f64::min);
    let y_lo = ln(knee) - (60.0 / ca).min(700.0);
    let y_hi = ln(0.5);
    let tol = Tolerance {
        absolute: 0.0,
        relative: 1e-12,
        max_intervals: 4000,
    };

    let lower = integrate(
        |y| {
            let s = exp(y);
            exp(ca * y + (a - 1.0) * log1p(-s) - log_product(s))
        },
        y_lo,
        y_hi,
        tol,
    );
    let w_hi = exp(a * ln(0.5));
    let upper = integrate(
        |w| {
            let s = -expm1(ln(w) / a);
            exp((ca - 1.0) * ln(s) - log_product(s)) / a
        },
        0.0,
        w_hi,
        tol,
    );
    let value = lower.value + upper.value;
    let error = lower.error + upper.error;
    if !value.is_finite() || error > 1e-8 * abs(value) {
        return Err(Error::NumericalInstability { value });
    }
    Ok(value)
}
