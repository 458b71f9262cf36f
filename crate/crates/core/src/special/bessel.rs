//! Modified Bessel function of the first kind, exponentially scaled.

use crate::math::{exp, ln, ln_gamma, PI};

// Below this argument the power series is used, above it the large-argument
// expansion.
const SWITCH: f64 = 30.0;

/// `e^{−z} I_ν(z)` for `z ≥ 0`, `ν > −1`.
pub fn bessel_i_scaled(nu: f64, z: f64) -> f64 {
    exp(ln_bessel_i(nu, z) - z)
}

/// `ln I_ν(z)` for `z ≥ 0`, `ν > −1`. Returns `−∞` at `z = 0` for `ν > 0`.
pub fn ln_bessel_i(nu: f64, z: f64) -> f64 {
    debug_assert!(z >= 0.0 && nu > -1.0);
    if z == 0.0 {
        return if nu == 0.0 {
            0.0
        } else if nu > 0.0 {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        };
    }
    if z < SWITCH {
        ln_series(nu, z)
    } else {
        ln_asymptotic(nu, z)
    }
}

// Σ (z/2)^{2k+ν} / (k! Γ(k+ν+1)), summed relative to its first term.
fn ln_series(nu: f64, z: f64) -> f64 {
    let q = 0.25 * z * z;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= q / (k * (k + nu));
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
    }
    nu * ln(0.5 * z) - ln_gamma(nu + 1.0) + ln(sum)
}

// I_ν(z) ~ e^z / √(2πz) Σ (−1)^k a_k(ν) / z^k, stopped at the smallest term.
fn ln_asymptotic(nu: f64, z: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 0.0;
    loop {
        k += 1.0;
        let odd = 2.0 * k - 1.0;
        let next = -term * (mu - odd * odd) / (k * 8.0 * z);
        if next.abs() >= term.abs() || next == 0.0 {
            break;
        }
        term = next;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    z - 0.5 * ln(2.0 * PI * z) + ln(sum)
}
