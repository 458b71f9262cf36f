//! Fading power laws: Nakagami-m (gamma), η-µ and its two-gamma
//! decomposition, and the gamma approximation of shadowed fading.
//!
//! Every law is normalized to unit mean power.

use alloc::vec::Vec;

use crate::math::{exp, ln, ln_gamma, PI};
use crate::random::{GammaSampler, RandomStream};
use crate::special::ln_bessel_i;
use crate::{Error, Result};

/// Converts a shadowing spread in dB to the standard deviation of the
/// natural log of the shadowing gain.
pub const DB_TO_LOG_SPREAD: f64 = 8.686;

/// Ratio between the unit-mean decomposition scales and the ones displayed
/// in the rate analysis, which sum to a mean of one half.
pub const DISPLAYED_SCALE_ADJUSTMENT: f64 = 2.0;

/// η-µ power law parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EtaMu {
    pub eta: f64,
    pub mu: f64,
}

impl EtaMu {
    pub fn new(eta: f64, mu: f64) -> Result<Self> {
        if !(eta > 0.0 && eta.is_finite()) {
            return Err(Error::Domain("eta must be positive and finite"));
        }
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(Error::Domain("mu must be positive and finite"));
        }
        Ok(EtaMu { eta, mu })
    }

    /// `(h, H)` with `h = (2 + η⁻¹ + η)/4`, `H = (η⁻¹ − η)/4`.
    pub fn h_coefficients(&self) -> (f64, f64) {
        let inv = 1.0 / self.eta;
        ((2.0 + inv + self.eta) / 4.0, (inv - self.eta) / 4.0)
    }
}

/// The two independent gamma components of an η-µ power variate.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GammaComponentPair {
    pub shape1: f64,
    pub scale1: f64,
    pub shape2: f64,
    pub scale2: f64,
}

impl GammaComponentPair {
    pub fn mean(&self) -> f64 {
        self.shape1 * self.scale1 + self.shape2 * self.scale2
    }
}

/// Fading law of one link.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum FadingSpec {
    /// Nakagami-m power: Gamma(m, 1/m).
    Gamma {
        m: f64,
    },
    EtaMu(EtaMu),
    /// Nakagami-m under log-normal shadowing, approximated by a gamma law of
    /// shape `beta`. `gamma_scale` is the moment-matched scale before
    /// normalization to unit mean.
    CompositeGamma {
        m: f64,
        sigma_db: f64,
        beta: f64,
        gamma_scale: f64,
    },
    /// η-µ under log-normal shadowing: each of the two gamma components is
    /// replaced by its shadowed gamma approximation of shape `beta` (common
    /// to both, as they share `µ`), keeping its share of the mean.
    CompositeEtaMu {
        params: EtaMu,
        sigma_db: f64,
        beta: f64,
    },
}

impl FadingSpec {
    pub fn nakagami(m: f64) -> Result<Self> {
        if !(m > 0.0 && m.is_finite()) {
            return Err(Error::Domain("nakagami m must be positive and finite"));
        }
        Ok(FadingSpec::Gamma { m })
    }

    pub fn eta_mu(eta: f64, mu: f64) -> Result<Self> {
        EtaMu::new(eta, mu).map(FadingSpec::EtaMu)
    }

    pub fn composite(m: f64, sigma_db: f64) -> Result<Self> {
        let (beta, gamma_scale) = composite_params(m, sigma_db)?;
        Ok(FadingSpec::CompositeGamma {
            m,
            sigma_db,
            beta,
            gamma_scale,
        })
    }

    pub fn composite_eta_mu(eta: f64, mu: f64, sigma_db: f64) -> Result<Self> {
        let params = EtaMu::new(eta, mu)?;
        let (beta, _) = composite_params(mu, sigma_db)?;
        Ok(FadingSpec::CompositeEtaMu {
            params,
            sigma_db,
            beta,
        })
    }

    /// Whether the law is one of the two-component η-µ forms.
    pub fn is_eta_mu(&self) -> bool {
        matches!(
            self,
            FadingSpec::EtaMu(_) | FadingSpec::CompositeEtaMu { .. }
        )
    }

    /// Unit-mean gamma components `(shape, scale)` whose independent sum has
    /// this law.
    pub fn components(&self) -> Vec<(f64, f64)> {
        match *self {
            FadingSpec::Gamma { m } => alloc::vec![(m, 1.0 / m)],
            FadingSpec::EtaMu(p) => {
                let pair = decompose_eta_mu(&p);
                alloc::vec![(pair.shape1, pair.scale1), (pair.shape2, pair.scale2)]
            }
            FadingSpec::CompositeGamma { beta, .. } => alloc::vec![(beta, 1.0 / beta)],
            FadingSpec::CompositeEtaMu { params, beta, .. } => {
                let pair = decompose_eta_mu(&params);
                alloc::vec![
                    (beta, pair.shape1 * pair.scale1 / beta),
                    (beta, pair.shape2 * pair.scale2 / beta)
                ]
            }
        }
    }

    /// Gamma shape of a single-component law (`None` for the η-µ forms).
    pub fn gamma_shape(&self) -> Option<f64> {
        match *self {
            FadingSpec::Gamma { m } => Some(m),
            FadingSpec::CompositeGamma { beta, .. } => Some(beta),
            FadingSpec::EtaMu(_) | FadingSpec::CompositeEtaMu { .. } => None,
        }
    }

    pub fn sampler(&self) -> FadingSampler {
        FadingSampler {
            parts: self
                .components()
                .into_iter()
                .map(|(k, s)| GammaSampler::new(k, s))
                .collect(),
        }
    }
}

/// Draws unit-mean powers for a [`FadingSpec`].
#[derive(Debug, Clone)]
pub struct FadingSampler {
    parts: Vec<GammaSampler>,
}

impl FadingSampler {
    #[inline]
    pub fn sample(&self, rng: &mut RandomStream) -> f64 {
        self.parts.iter().map(|g| g.sample(rng)).sum()
    }
}

/// η-µ power density
/// `2√π µ^{µ+½} h^µ x^{µ−½} / (Γ(µ) H^{µ−½}) · e^{−2µhx} I_{µ−½}(2µHx)`,
/// evaluated in log space. `|H|` is used, which makes the law symmetric
/// under `η ↔ 1/η`; at `η = 1` the Bessel limit gives Gamma(2µ, 1/(2µ)).
pub fn eta_mu_pdf(params: &EtaMu, x: f64) -> Result<f64> {
    if x < 0.0 || x.is_nan() {
        return Err(Error::Domain("eta-mu density needs x >= 0"));
    }
    let mu = params.mu;
    let nu = mu - 0.5;
    let (h, big_h) = params.h_coefficients();
    let big_h = big_h.abs();
    if x == 0.0 {
        return Ok(if nu > 0.0 {
            0.0
        } else if nu == 0.0 {
            // x^0 · I_0(0) = 1
            exp(0.5 * ln(PI) + ln(2.0) + mu * ln(mu) + 0.5 * ln(mu) + mu * ln(h) - ln_gamma(mu))
        } else {
            f64::INFINITY
        });
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    if big_h == 0.0 {
        let k = 2.0 * mu;
        return Ok(exp(k * ln(k) + (k - 1.0) * ln(x) - k * x - ln_gamma(k)));
    }
    let z = 2.0 * mu * big_h * x;
    let log = ln(2.0) + 0.5 * ln(PI) + (mu + 0.5) * ln(mu) + mu * ln(h) + nu * ln(x)
        - ln_gamma(mu)
        - nu * ln(big_h)
        - 2.0 * mu * h * x
        + ln_bessel_i(nu, z);
    Ok(exp(log))
}

/// Unit-mean two-gamma decomposition: shapes `µ`, scales
/// `1/(µ(1+η⁻¹))` and `1/(µ(1+η))`.
pub fn decompose_eta_mu(params: &EtaMu) -> GammaComponentPair {
    let mu = params.mu;
    GammaComponentPair {
        shape1: mu,
        scale1: 1.0 / (mu * (1.0 + 1.0 / params.eta)),
        shape2: mu,
        scale2: 1.0 / (mu * (1.0 + params.eta)),
    }
}

/// Moment-matched gamma approximation of Nakagami-m fading times log-normal
/// shadowing with spread `sigma_db`: returns `(β, γ)` with
/// `β = m / ((m+1) e^{s²} − m)`, `γ = ((1+m)/m) e^{3s²/2} − e^{s²/2}`,
/// `s = σ_dB / 8.686`.
pub fn composite_params(m: f64, sigma_db: f64) -> Result<(f64, f64)> {
    if !(m > 0.0 && m.is_finite()) {
        return Err(Error::Domain("composite m must be positive"));
    }
    if !(sigma_db >= 0.0 && sigma_db.is_finite()) {
        return Err(Error::Domain("shadowing spread must be nonnegative"));
    }
    let s2 = log_spread_squared(sigma_db);
    let beta = m / ((m + 1.0) * exp(s2) - m);
    let gamma = (1.0 + m) / m * exp(1.5 * s2) - exp(0.5 * s2);
    Ok((beta, gamma))
}

/// Correlation of two composite (fading × shadowing) powers, given the
/// fading-power correlation `rho_s` and the shadowing-gain correlation
/// `rho_sh`. Without shadowing this is `rho_s`.
pub fn composite_correlation(rho_s: f64, rho_sh: f64, m: f64, sigma_db: f64) -> f64 {
    let s2 = log_spread_squared(sigma_db);
    if s2 == 0.0 {
        return rho_s;
    }
    let k = 1.0 / crate::math::expm1(s2);
    (rho_s * k + rho_sh * m + rho_s * rho_sh) / (m + k + 1.0)
}

/// Correlation of the underlying Gaussians that gives log-normal gains
/// `e^{sZ}` a correlation of `rho_sh`.
pub fn lognormal_gaussian_correlation(rho_sh: f64, sigma_db: f64) -> f64 {
    let s2 = log_spread_squared(sigma_db);
    if s2 == 0.0 {
        return rho_sh;
    }
    crate::math::log1p(rho_sh * crate::math::expm1(s2)) / s2
}

/// `(σ_dB / 8.686)²`.
pub fn log_spread_squared(sigma_db: f64) -> f64 {
    let s = sigma_db / DB_TO_LOG_SPREAD;
    s * s
}
