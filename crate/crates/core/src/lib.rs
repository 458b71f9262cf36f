//! Coverage probability and rate of a cellular downlink user when the
//! interfering base stations are independent or correlated.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only pure
//! computation:
//!
//! - [`special`]: Pochhammer symbols and the Lauricella function `F_D`.
//! - [`fading`]: Nakagami-m, η-µ and shadowed-composite power laws.
//! - [`correlation`]: correlation matrices, `A = DC` spectra, majorization.
//! - [`geometry`]: the 19-cell hexagonal layout and path-loss weights.
//! - [`analytics`]: closed-form coverage and the series-term comparison.
//! - [`simulator`]: the Monte Carlo engine for coverage, rate and convex order.
//!
//! File formats, parallel execution and the command line live in the
//! `intercor` crate.

#![no_std]
#![deny(missing_debug_implementations)]

extern crate alloc;

pub mod analytics;
pub mod correlation;
mod error;
pub mod fading;
pub mod geometry;
pub mod linalg;
mod math;
pub mod quadrature;
pub mod random;
pub mod simulator;
pub mod special;

pub use error::{Error, Result};
