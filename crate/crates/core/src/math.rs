//! Thin wrappers over `libm` so results do not depend on the platform libm.

pub(crate) use libm::{atan2, cos, exp, expm1, fabs as abs, floor, log1p, pow, sin, sqrt};

#[inline]
pub(crate) fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub(crate) fn ln_gamma(x: f64) -> f64 {
    libm::lgamma_r(x).0
}

pub(crate) const PI: f64 = core::f64::consts::PI;
