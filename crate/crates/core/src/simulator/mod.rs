//! Monte Carlo estimation of downlink coverage and rate.
//!
//! A [`ScenarioConfig`] is turned into a [`PreparedScenario`]: the user's
//! path gain and fading sampler plus a list of interference units
//! `(weight, shape)`, so that `I = Σ w_k G_k` with independent
//! `G_k ~ Gamma(shape_k, 1)`. Independent interferers contribute one unit
//! per gamma component; correlated interferers contribute the eigenvalues
//! of `DC` with the same shape.
//!
//! Trials are split into fixed chunks of [`CHUNK_TRIALS`], chunk `k` drawing
//! from `RandomStream::split(seed, k)`. Chunk accumulators merged in chunk
//! order give bit-identical results whether chunks ran serially or in
//! parallel.

pub mod convex;
pub mod two_layer;

pub use convex::{verify_convex_order, ConvexFn, OrderEntry, OrderReport};
pub use two_layer::{run_two_layer, TwoLayerConfig};

use alloc::vec::Vec;

use crate::analytics::{CoverageQuery, InterfererShape, Variant};
use crate::correlation::{weighted_spectrum, CorrelationModel};
use crate::fading::{FadingSampler, FadingSpec};
use crate::geometry::{NetworkLayout, INTERFERER_COUNT};
use crate::math::{log1p, sqrt};
use crate::random::{GammaSampler, RandomStream};
use crate::{Error, Result};

pub const MIN_TRIALS: u64 = 1_000;
pub const DEFAULT_TRIALS: u64 = 100_000;
pub const CHUNK_TRIALS: u64 = 4_096;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Receiver {
    /// Single antenna, every interferer heard.
    Siso,
    /// Two receive antennas; the closest interfering site is cancelled.
    SimoLmmse,
    /// Two streams per site; one stream of the closest site is cancelled.
    MuMimo,
}

impl Receiver {
    pub fn streams_per_site(&self) -> usize {
        match self {
            Receiver::MuMimo => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScenarioConfig {
    /// Layout with the user placed.
    pub layout: NetworkLayout,
    pub user_fading: FadingSpec,
    /// Law shared by every interferer.
    pub interferer_fading: FadingSpec,
    /// Site-level correlation over the 18 interferers; `None` means
    /// independent.
    pub corr: Option<CorrelationModel>,
    pub trials: u64,
    pub seed: u64,
    pub receiver: Receiver,
    /// Linear SIR threshold.
    pub threshold: f64,
}

/// One term `w · G`, `G ~ Gamma(shape, 1)`, of the interference sum.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct InterferenceUnit {
    pub weight: f64,
    pub shape: f64,
}

#[derive(Debug, Clone)]
pub struct PreparedScenario {
    pub user_gain: f64,
    pub threshold: f64,
    pub units: Vec<InterferenceUnit>,
    user: FadingSampler,
    samplers: Vec<GammaSampler>,
    analytic: Option<CoverageQuery>,
}

impl PreparedScenario {
    /// `Σ w_k G_k`.
    #[inline]
    pub fn draw_interference(&self, rng: &mut RandomStream) -> f64 {
        self.units
            .iter()
            .zip(&self.samplers)
            .map(|(u, g)| u.weight * g.sample(rng))
            .sum()
    }

    #[inline]
    pub fn draw_signal(&self, rng: &mut RandomStream) -> f64 {
        self.user_gain * self.user.sample(rng)
    }

    /// `E[I] = Σ w_k shape_k`.
    pub fn mean_interference(&self) -> f64 {
        self.units.iter().map(|u| u.weight * u.shape).sum()
    }

    /// The matching closed-form query, when the user law is gamma.
    pub fn coverage_query(&self) -> Option<&CoverageQuery> {
        self.analytic.as_ref()
    }

    /// Accumulates `len` trials of chunk `index`.
    pub fn run_chunk(&self, seed: u64, index: u64, len: u64) -> Accumulator {
        let mut rng = RandomStream::split(seed, index);
        let mut acc = Accumulator::default();
        for _ in 0..len {
            let s = self.draw_signal(&mut rng);
            let i = self.draw_interference(&mut rng);
            acc.push(s / i, self.threshold);
        }
        acc
    }
}

/// Sufficient statistics of a batch of trials.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Accumulator {
    pub trials: u64,
    pub hits: u64,
    pub rate_sum: f64,
    pub rate_sq_sum: f64,
}

impl Accumulator {
    #[inline]
    pub fn push(&mut self, sir: f64, threshold: f64) {
        self.trials += 1;
        if sir > threshold {
            self.hits += 1;
        }
        let rate = log1p(sir);
        self.rate_sum += rate;
        self.rate_sq_sum += rate * rate;
    }

    pub fn merge(&mut self, other: &Accumulator) {
        self.trials += other.trials;
        self.hits += other.hits;
        self.rate_sum += other.rate_sum;
        self.rate_sq_sum += other.rate_sq_sum;
    }

    pub fn coverage(&self) -> (f64, f64) {
        let n = self.trials as f64;
        let p = self.hits as f64 / n;
        (p, sqrt(p * (1.0 - p) / n))
    }

    pub fn rate(&self) -> (f64, f64) {
        let n = self.trials as f64;
        let mean = self.rate_sum / n;
        let var = ((self.rate_sq_sum - n * mean * mean) / (n - 1.0)).max(0.0);
        (mean, sqrt(var / n))
    }
}

/// Monte Carlo estimates for one scenario.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExperimentResult {
    pub normalized_distance: f64,
    pub coverage: f64,
    pub coverage_se: f64,
    pub rate_nats: f64,
    pub rate_se: f64,
    pub trials: u64,
    pub seed: u64,
    pub analytic_coverage: Option<f64>,
}

impl ExperimentResult {
    pub fn from_accumulator(
        acc: &Accumulator,
        normalized_distance: f64,
        seed: u64,
        analytic_coverage: Option<f64>,
    ) -> Self {
        let (coverage, coverage_se) = acc.coverage();
        let (rate_nats, rate_se) = acc.rate();
        ExperimentResult {
            normalized_distance,
            coverage,
            coverage_se,
            rate_nats,
            rate_se,
            trials: acc.trials,
            seed,
            analytic_coverage,
        }
    }
}

/// `(chunk index, trial count)` for every chunk of a run.
pub fn chunk_plan(trials: u64) -> Vec<(u64, u64)> {
    let mut plan = Vec::new();
    let mut left = trials;
    let mut k = 0;
    while left > 0 {
        let len = left.min(CHUNK_TRIALS);
        plan.push((k, len));
        left -= len;
        k += 1;
    }
    plan
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials < MIN_TRIALS {
            return Err(Error::InvalidArgument("trials below minimum 10^3"));
        }
        if !(self.threshold > 0.0 && self.threshold.is_finite()) {
            return Err(Error::Domain("threshold must be positive"));
        }
        if self.layout.user.is_none() {
            return Err(Error::InvalidArgument("layout has no user placed"));
        }
        if let Some(c) = &self.corr {
            if c.n != INTERFERER_COUNT {
                return Err(Error::LengthMismatch {
                    left: c.n,
                    right: INTERFERER_COUNT,
                });
            }
        }
        Ok(())
    }

    /// Resolves weights, cancellation and eigen-weights.
    pub fn prepare(&self) -> Result<PreparedScenario> {
        self.validate()?;
        let gains = self.layout.interferer_gains()?;
        let streams = self.receiver.streams_per_site();
        let components = self.interferer_fading.components();
        let per_site = streams * components.len();

        let mut weights = Vec::with_capacity(gains.len() * per_site);
        let mut shapes = Vec::with_capacity(gains.len() * per_site);
        for g in &gains {
            for _ in 0..streams {
                for &(shape, scale) in &components {
                    weights.push(g * scale);
                    shapes.push(shape);
                }
            }
        }

        // Rows removed by the receiver, highest first.
        let closest = self.layout.closest_interferer()?;
        let cancelled: Vec<usize> = match self.receiver {
            Receiver::Siso => Vec::new(),
            Receiver::SimoLmmse => (closest * per_site..(closest + 1) * per_site)
                .rev()
                .collect(),
            Receiver::MuMimo => (closest * per_site..closest * per_site + components.len())
                .rev()
                .collect(),
        };
        for &row in &cancelled {
            weights.remove(row);
            shapes.remove(row);
        }

        let units: Vec<InterferenceUnit> = match &self.corr {
            None => weights
                .iter()
                .zip(&shapes)
                .map(|(&weight, &shape)| InterferenceUnit { weight, shape })
                .collect(),
            Some(site) => {
                let shape = shapes[0];
                if shapes.iter().any(|&s| s != shape) {
                    return Err(Error::InvalidArgument(
                        "correlated interferers need a common component shape",
                    ));
                }
                let mut model = site.expand(per_site)?;
                for &row in &cancelled {
                    model = model.without(row)?;
                }
                weighted_spectrum(&weights, &model)?
                    .lambda_hats
                    .into_iter()
                    .map(|weight| InterferenceUnit { weight, shape })
                    .collect()
            }
        };

        let analytic = self.user_fading.gamma_shape().and_then(|m| {
            let shape = units.first()?.shape;
            if units.iter().any(|u| u.shape != shape) {
                return None;
            }
            let eta_mu = self.interferer_fading.is_eta_mu();
            let variant = match (eta_mu, self.corr.is_some()) {
                (false, false) => Variant::NakagamiIndep,
                (false, true) => Variant::NakagamiCorr,
                (true, false) => Variant::EtaMuIndep,
                (true, true) => Variant::EtaMuCorr,
            };
            Some(CoverageQuery {
                m,
                t: self.threshold,
                r: self.layout.user_distance().ok()?,
                alpha: self.layout.alpha,
                weights: units.iter().map(|u| u.weight).collect(),
                interferer_shape: InterfererShape::Common(shape),
                variant,
            })
        });

        Ok(PreparedScenario {
            user_gain: self.layout.user_gain()?,
            threshold: self.threshold,
            samplers: units
                .iter()
                .map(|u| GammaSampler::new(u.shape, 1.0))
                .collect(),
            units,
            user: self.user_fading.sampler(),
            analytic,
        })
    }

    fn normalized_distance(&self) -> f64 {
        self.layout
            .user
            .as_ref()
            .map_or(f64::NAN, |u| u.normalized_distance)
    }
}

/// One interference draw for `cfg` (prepares the scenario on every call;
/// use [`PreparedScenario::draw_interference`] in loops).
pub fn draw_interference(cfg: &ScenarioConfig, rng: &mut RandomStream) -> Result<f64> {
    Ok(cfg.prepare()?.draw_interference(rng))
}

/// Runs every chunk serially and merges in chunk order. The analytic
/// coverage is attached when a closed form exists.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<ExperimentResult> {
    let prepared = cfg.prepare()?;
    let mut acc = Accumulator::default();
    for (index, len) in chunk_plan(cfg.trials) {
        acc.merge(&prepared.run_chunk(cfg.seed, index, len));
    }
    let analytic = match prepared.coverage_query() {
        Some(q) => Some(crate::analytics::coverage_probability(q)?),
        None => None,
    };
    Ok(ExperimentResult::from_accumulator(
        &acc,
        cfg.normalized_distance(),
        cfg.seed,
        analytic,
    ))
}

/// Empirical `P(SIR > T)` with its binomial standard error.
pub fn run_coverage(cfg: &ScenarioConfig) -> Result<ExperimentResult> {
    run_scenario(cfg)
}

/// Empirical `E[ln(1 + SIR)]` in nats with its standard error.
pub fn run_rate(cfg: &ScenarioConfig) -> Result<ExperimentResult> {
    run_scenario(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlation::{build_correlation, CorrelationStructure};
    use crate::geometry::hex_layout;

    fn config(distance: f64, rho: Option<f64>, receiver: Receiver) -> ScenarioConfig {
        ScenarioConfig {
            layout: hex_layout(1.0).unwrap().place_user(distance, 0.0).unwrap(),
            user_fading: FadingSpec::nakagami(1.0).unwrap(),
            interferer_fading: FadingSpec::nakagami(1.0).unwrap(),
            corr: rho.map(|r| build_correlation(18, r, CorrelationStructure::Full).unwrap()),
            trials: 20_000,
            seed: 9,
            receiver,
            threshold: 2.0,
        }
    }

    #[test]
    fn chunk_plan_covers_trials() {
        let plan = chunk_plan(10_000);
        assert_eq!(plan.iter().map(|p| p.1).sum::<u64>(), 10_000);
        assert_eq!(plan.len(), 3);
        assert!(chunk_plan(0).is_empty());
    }

    #[test]
    fn unit_counts_per_receiver() {
        let p = config(0.5, None, Receiver::Siso).prepare().unwrap();
        assert_eq!(p.units.len(), 18);
        let p = config(0.5, None, Receiver::SimoLmmse).prepare().unwrap();
        assert_eq!(p.units.len(), 17);
        let p = config(0.5, Some(0.5), Receiver::MuMimo).prepare().unwrap();
        assert_eq!(p.units.len(), 35);
        let mut c = config(0.5, Some(0.5), Receiver::MuMimo);
        c.interferer_fading = FadingSpec::eta_mu(2.0, 1.0).unwrap();
        assert_eq!(c.prepare().unwrap().units.len(), 70);
    }

    #[test]
    fn zero_rho_matches_independent_weights() {
        let a = config(0.5, None, Receiver::Siso).prepare().unwrap();
        let b = config(0.5, Some(0.0), Receiver::Siso).prepare().unwrap();
        let mut wa: Vec<f64> = a.units.iter().map(|u| u.weight).collect();
        wa.sort_by(f64::total_cmp);
        let wb: Vec<f64> = b.units.iter().map(|u| u.weight).collect();
        for (x, y) in wa.iter().zip(&wb) {
            assert!((x - y).abs() < 1e-15 * x.max(1.0));
        }
    }

    #[test]
    fn deterministic() {
        let c = config(0.7, Some(0.6), Receiver::Siso);
        assert_eq!(run_scenario(&c).unwrap(), run_scenario(&c).unwrap());
    }

    #[test]
    fn rejects_too_few_trials() {
        let mut c = config(0.7, None, Receiver::Siso);
        c.trials = 10;
        assert!(c.prepare().is_err());
    }

    #[test]
    fn agrees_with_closed_form() {
        let c = config(0.7, Some(0.6), Receiver::Siso);
        let r = run_scenario(&c).unwrap();
        let a = r.analytic_coverage.unwrap();
        assert!((r.coverage - a).abs() < 3.0 * r.coverage_se, "{r:?}");
    }
}
