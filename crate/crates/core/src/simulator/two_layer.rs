//! Direct sampling of Nakagami fading times log-normal shadowing, without
//! the gamma approximation.
//!
//! Correlated fading powers come from `2m` correlated real Gaussian vectors
//! (entries `√ρ^{|p−q|}` are the Gaussian correlations), so the shape `m`
//! must be a multiple of one half. Shadowing gains are `e^{sZ − s²/2}` with
//! Gaussian correlation chosen so the gains themselves have correlation
//! `ρ_l^{|p−q|}`.

use alloc::vec;
use alloc::vec::Vec;

use super::{chunk_plan, Accumulator, ExperimentResult, MIN_TRIALS};
use crate::fading::{log_spread_squared, lognormal_gaussian_correlation};
use crate::geometry::NetworkLayout;
use crate::linalg::{symmetric_eigen, SymmetricMatrix};
use crate::math::{exp, pow, sqrt};
use crate::random::{GammaSampler, RandomStream};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TwoLayerConfig {
    pub layout: NetworkLayout,
    pub user_m: f64,
    /// Interferer Nakagami shape; `2 m_c` must be an integer.
    pub interferer_m: f64,
    pub sigma_db: f64,
    /// Whether the serving link is shadowed too.
    pub shadow_user: bool,
    /// Fading correlation base `ρ_s` (`None` for independent fading).
    pub rho_s: Option<f64>,
    /// Shadowing correlation base `ρ_l` (`None` for independent shadowing).
    pub rho_l: Option<f64>,
    pub trials: u64,
    pub seed: u64,
    pub threshold: f64,
}

fn factor(n: usize, entry: impl Fn(usize) -> f64) -> Result<Vec<Vec<f64>>> {
    let m = SymmetricMatrix::from_fn(n, |i, j| if i == j { 1.0 } else { entry(i.abs_diff(j)) });
    Ok(symmetric_eigen(&m)?.sqrt_factor())
}

fn correlated_normals(l: &[Vec<f64>], rng: &mut RandomStream, eps: &mut [f64], out: &mut [f64]) {
    for e in eps.iter_mut() {
        *e = rng.normal();
    }
    for (o, row) in out.iter_mut().zip(l) {
        *o = row.iter().zip(eps.iter()).map(|(a, b)| a * b).sum();
    }
}

/// Coverage and rate with fading and shadowing drawn separately.
pub fn run_two_layer(cfg: &TwoLayerConfig) -> Result<ExperimentResult> {
    if cfg.trials < MIN_TRIALS {
        return Err(Error::InvalidArgument("trials below minimum 10^3"));
    }
    let dof = 2.0 * cfg.interferer_m;
    if !(dof >= 1.0 && dof == crate::math::floor(dof)) {
        return Err(Error::Domain(
            "two-layer sampling needs 2 m_c to be a positive integer",
        ));
    }
    let dof = dof as usize;
    let gains = cfg.layout.interferer_gains()?;
    let n = gains.len();
    let fading = match cfg.rho_s {
        Some(rho) => Some(factor(n, |lag| sqrt(pow(rho, lag as f64)))?),
        None => None,
    };
    let shadow = match cfg.rho_l {
        Some(rho) => Some(factor(n, |lag| {
            lognormal_gaussian_correlation(pow(rho, lag as f64), cfg.sigma_db)
        })?),
        None => None,
    };
    let s = sqrt(log_spread_squared(cfg.sigma_db));
    let half_s2 = 0.5 * s * s;
    let user = GammaSampler::new(cfg.user_m, 1.0 / cfg.user_m);
    let independent_fading = GammaSampler::new(cfg.interferer_m, 1.0 / cfg.interferer_m);
    let user_gain = cfg.layout.user_gain()?;

    let mut acc = Accumulator::default();
    let mut eps = vec![0.0; n];
    let mut z = vec![0.0; n];
    let mut power = vec![0.0; n];
    let mut shadow_gain = vec![0.0; n];
    for (index, len) in chunk_plan(cfg.trials) {
        let mut rng = RandomStream::split(cfg.seed, index);
        for _ in 0..len {
            let mut signal = user_gain * user.sample(&mut rng);
            if cfg.shadow_user {
                signal *= exp(s * rng.normal() - half_s2);
            }
            match &fading {
                Some(l) => {
                    power.iter_mut().for_each(|p| *p = 0.0);
                    for _ in 0..dof {
                        correlated_normals(l, &mut rng, &mut eps, &mut z);
                        for (p, zi) in power.iter_mut().zip(&z) {
                            *p += zi * zi;
                        }
                    }
                    power.iter_mut().for_each(|p| *p /= dof as f64);
                }
                None => power
                    .iter_mut()
                    .for_each(|p| *p = independent_fading.sample(&mut rng)),
            }
            match &shadow {
                Some(l) => {
                    correlated_normals(l, &mut rng, &mut eps, &mut z);
                    for (g, zi) in shadow_gain.iter_mut().zip(&z) {
                        *g = exp(s * zi - half_s2);
                    }
                }
                None => shadow_gain
                    .iter_mut()
                    .for_each(|g| *g = exp(s * rng.normal() - half_s2)),
            }
            let interference: f64 = gains
                .iter()
                .zip(&power)
                .zip(&shadow_gain)
                .map(|((g, p), x)| g * p * x)
                .sum();
            acc.push(signal / interference, cfg.threshold);
        }
    }
    let distance = cfg
        .layout
        .user
        .as_ref()
        .map_or(f64::NAN, |u| u.normalized_distance);
    Ok(ExperimentResult::from_accumulator(
        &acc, distance, cfg.seed, None,
    ))
}
