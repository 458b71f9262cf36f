//! Seeded random streams and the variate generators the simulator needs.
//!
//! A [`RandomStream`] wraps ChaCha8. Independent streams for parallel
//! workers come from [`RandomStream::split`], which selects a distinct
//! ChaCha stream id under the same key, so a master seed fully determines
//! every worker's sequence regardless of how work is scheduled.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::math::{exp, ln, pow, sqrt};

const TWO_POW_53: f64 = 9_007_199_254_740_992.0;

#[derive(Debug, Clone)]
pub struct RandomStream {
    rng: ChaCha8Rng,
    spare_normal: Option<f64>,
}

impl RandomStream {
    pub fn new(seed: u64) -> Self {
        RandomStream {
            rng: ChaCha8Rng::seed_from_u64(seed),
            spare_normal: None,
        }
    }

    /// Child stream `id` of the stream created from `seed`.
    pub fn split(seed: u64, id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(id);
        rng.set_word_pos(0);
        RandomStream {
            rng,
            spare_normal: None,
        }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / TWO_POW_53
    }

    /// Uniform on the open interval `(0, 1)`.
    #[inline]
    pub fn uniform_open(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) / TWO_POW_53
    }

    /// Uniform integer in `0..n`.
    pub fn below(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        // Lemire's multiply-shift; the bias is below 2^-40 for our n.
        ((self.next_u64() as u128 * n as u128) >> 64) as usize
    }

    /// Standard normal by the Marsaglia polar method.
    pub fn normal(&mut self) -> f64 {
        if let Some(z) = self.spare_normal.take() {
            return z;
        }
        loop {
            let u = 2.0 * self.uniform() - 1.0;
            let v = 2.0 * self.uniform() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let f = sqrt(-2.0 * ln(s) / s);
                self.spare_normal = Some(v * f);
                return u * f;
            }
        }
    }

    /// Exponential with unit mean.
    #[inline]
    pub fn exponential(&mut self) -> f64 {
        -ln(self.uniform_open())
    }
}

/// Gamma(shape, scale) sampler (Marsaglia–Tsang squeeze with the
/// `U^(1/shape)` boost for shapes below one).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaSampler {
    shape: f64,
    scale: f64,
    d: f64,
    c: f64,
}

impl GammaSampler {
    /// # Panics
    /// If `shape` or `scale` is not a positive finite number.
    pub fn new(shape: f64, scale: f64) -> Self {
        assert!(
            shape > 0.0 && shape.is_finite() && scale > 0.0 && scale.is_finite(),
            "gamma sampler needs positive finite shape and scale"
        );
        let boosted = if shape < 1.0 { shape + 1.0 } else { shape };
        let d = boosted - 1.0 / 3.0;
        GammaSampler {
            shape,
            scale,
            d,
            c: 1.0 / sqrt(9.0 * d),
        }
    }

    pub fn shape(&self) -> f64 {
        self.shape
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    #[inline]
    pub fn sample(&self, rng: &mut RandomStream) -> f64 {
        if self.shape == 1.0 {
            return self.scale * rng.exponential();
        }
        let x = self.standard(rng);
        if self.shape < 1.0 {
            self.scale * x * pow(rng.uniform_open(), 1.0 / self.shape)
        } else {
            self.scale * x
        }
    }

    fn standard(&self, rng: &mut RandomStream) -> f64 {
        loop {
            let (z, v) = loop {
                let z = rng.normal();
                let v = 1.0 + self.c * z;
                if v > 0.0 {
                    break (z, v * v * v);
                }
            };
            let u = rng.uniform_open();
            let z2 = z * z;
            if u < 1.0 - 0.0331 * z2 * z2 || ln(u) < 0.5 * z2 + self.d * (1.0 - v + ln(v)) {
                return self.d * v;
            }
        }
    }
}

/// One Gamma(shape, scale) draw.
pub fn sample_gamma(shape: f64, scale: f64, rng: &mut RandomStream) -> f64 {
    GammaSampler::new(shape, scale).sample(rng)
}

/// Log-normal draw `exp(sigma · Z)`.
#[inline]
pub fn sample_lognormal(sigma: f64, rng: &mut RandomStream) -> f64 {
    exp(sigma * rng.normal())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    fn mean_and_se(xs: &[f64]) -> (f64, f64) {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
        (mean, sqrt(var / n))
    }

    #[test]
    fn exponential_special_case_mean() {
        let mut rng = RandomStream::new(7);
        let xs: Vec<f64> = (0..1_000_000)
            .map(|_| sample_gamma(1.0, 1.0, &mut rng))
            .collect();
        let (mean, se) = mean_and_se(&xs);
        assert!((mean - 1.0).abs() < 3.0 * se, "{mean} ± {se}");
        assert!((mean - 1.0).abs() < 0.003);
    }

    #[test]
    fn small_shape_mean() {
        let mut rng = RandomStream::new(11);
        let g = GammaSampler::new(0.5, 2.0);
        let xs: Vec<f64> = (0..1_000_000).map(|_| g.sample(&mut rng)).collect();
        let (mean, se) = mean_and_se(&xs);
        assert!((mean - 1.0).abs() < 3.0 * se, "{mean} ± {se}");
    }

    #[test]
    fn large_shape_mean_and_variance() {
        let mut rng = RandomStream::new(3);
        let g = GammaSampler::new(4.5, 0.5);
        let xs: Vec<f64> = (0..400_000).map(|_| g.sample(&mut rng)).collect();
        let (mean, se) = mean_and_se(&xs);
        assert!((mean - 2.25).abs() < 3.0 * se);
        let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / xs.len() as f64;
        assert!((var - 1.125).abs() < 0.02, "{var}");
    }

    #[test]
    fn fixed_seed_is_reproducible() {
        let mut a = RandomStream::new(42);
        let mut b = RandomStream::new(42);
        for _ in 0..1000 {
            assert_eq!(
                sample_gamma(0.3, 1.0, &mut a).to_bits(),
                sample_gamma(0.3, 1.0, &mut b).to_bits()
            );
        }
    }

    #[test]
    fn split_streams_differ() {
        let mut a = RandomStream::split(42, 0);
        let mut b = RandomStream::split(42, 1);
        let same = (0..64).filter(|_| a.next_u64() == b.next_u64()).count();
        assert_eq!(same, 0);
    }
}
