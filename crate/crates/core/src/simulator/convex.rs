//! Empirical check of `I ≤_cx Î` on a battery of convex functions.
//!
//! Both sums are built from the same gamma draws (common random numbers,
//! weights paired in ascending order), so the standard error of the
//! difference is small and each comparison is a paired test.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::{chunk_plan, ScenarioConfig};
use crate::math::{exp, log1p, sqrt};
use crate::random::{GammaSampler, RandomStream};
use crate::{Error, Result};

/// Convex test functions, applied to `I / E[I]`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ConvexFn {
    /// `x`; both convex and concave, so means must agree.
    Linear,
    Square,
    Exp,
    /// `max(x − a, 0)`.
    Hinge(f64),
    /// `ln(1 + s/x)`.
    LogRate(f64),
}

impl ConvexFn {
    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            ConvexFn::Linear => x,
            ConvexFn::Square => x * x,
            ConvexFn::Exp => exp(x),
            ConvexFn::Hinge(a) => (x - a).max(0.0),
            ConvexFn::LogRate(s) => log1p(s / x),
        }
    }

    pub fn label(&self) -> String {
        match *self {
            ConvexFn::Linear => "x".into(),
            ConvexFn::Square => "x^2".into(),
            ConvexFn::Exp => "exp(x)".into(),
            ConvexFn::Hinge(a) => format!("max(x-{a},0)"),
            ConvexFn::LogRate(s) => format!("ln(1+{s}/x)"),
        }
    }

    /// `x`, `x²`, `eˣ`, hinges at 0.5, 1, 1.5, 2 and `ln(1 + s/x)` for
    /// `s ∈ {0.1, 1, 10}`.
    pub fn standard_battery() -> Vec<ConvexFn> {
        vec![
            ConvexFn::Linear,
            ConvexFn::Square,
            ConvexFn::Exp,
            ConvexFn::Hinge(0.5),
            ConvexFn::Hinge(1.0),
            ConvexFn::Hinge(1.5),
            ConvexFn::Hinge(2.0),
            ConvexFn::LogRate(0.1),
            ConvexFn::LogRate(1.0),
            ConvexFn::LogRate(10.0),
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OrderEntry {
    pub function: String,
    pub mean_indep: f64,
    pub mean_corr: f64,
    pub se_indep: f64,
    pub se_corr: f64,
    /// Standard error of the paired difference.
    pub se_diff: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OrderReport {
    pub trials: u64,
    pub entries: Vec<OrderEntry>,
}

impl OrderReport {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }
}

#[derive(Clone, Copy, Default)]
struct Moments {
    a: f64,
    a2: f64,
    b: f64,
    b2: f64,
    d2: f64,
}

/// Compares `E[φ(I)]` with `E[φ(Î)]` for every `φ` in `battery`; a
/// function passes when `E[φ(I)] ≤ E[φ(Î)] + 3 SE` (two-sided for
/// [`ConvexFn::Linear`]). Uses the seed of `indep`.
pub fn verify_convex_order(
    indep: &ScenarioConfig,
    corr: &ScenarioConfig,
    battery: &[ConvexFn],
    trials: u64,
) -> Result<OrderReport> {
    let pi = indep.prepare()?;
    let pc = corr.prepare()?;
    if pi.units.len() != pc.units.len() {
        return Err(Error::LengthMismatch {
            left: pi.units.len(),
            right: pc.units.len(),
        });
    }
    let shape = pi.units[0].shape;
    if pi.units.iter().chain(&pc.units).any(|u| u.shape != shape) {
        return Err(Error::InvalidArgument(
            "convex-order check needs one common component shape",
        ));
    }
    let mut wi: Vec<f64> = pi.units.iter().map(|u| u.weight).collect();
    let mut wc: Vec<f64> = pc.units.iter().map(|u| u.weight).collect();
    wi.sort_by(f64::total_cmp);
    wc.sort_by(f64::total_cmp);
    let mean = pi.mean_interference();
    let sampler = GammaSampler::new(shape, 1.0);

    let mut moments = vec![Moments::default(); battery.len()];
    for (index, len) in chunk_plan(trials) {
        let mut rng = RandomStream::split(indep.seed, index);
        for _ in 0..len {
            let (mut si, mut sc) = (0.0, 0.0);
            for (a, b) in wi.iter().zip(&wc) {
                let g = sampler.sample(&mut rng);
                si += a * g;
                sc += b * g;
            }
            let (xi, xc) = (si / mean, sc / mean);
            for (f, m) in battery.iter().zip(moments.iter_mut()) {
                let (fa, fb) = (f.eval(xi), f.eval(xc));
                m.a += fa;
                m.a2 += fa * fa;
                m.b += fb;
                m.b2 += fb * fb;
                m.d2 += (fa - fb) * (fa - fb);
            }
        }
    }

    let n = trials as f64;
    let se = |s: f64, s2: f64| sqrt(((s2 - s * s / n) / (n - 1.0)).max(0.0) / n);
    let entries = battery
        .iter()
        .zip(&moments)
        .map(|(f, m)| {
            let (mean_indep, mean_corr) = (m.a / n, m.b / n);
            let se_diff = se(m.a - m.b, m.d2);
            let pass = match f {
                ConvexFn::Linear => (mean_indep - mean_corr).abs() <= 3.0 * se_diff,
                _ => mean_indep <= mean_corr + 3.0 * se_diff,
            };
            OrderEntry {
                function: f.label(),
                mean_indep,
                mean_corr,
                se_indep: se(m.a, m.a2),
                se_corr: se(m.b, m.b2),
                se_diff,
                pass,
            }
        })
        .collect();
    Ok(OrderReport { trials, entries })
}
