//! Pochhammer symbols, the Lauricella function of the fourth kind, its
//! grouped low-order expansion, and exponentially scaled Bessel functions.

mod bessel;
mod expansion;
mod lauricella;

pub use bessel::{bessel_i_scaled, ln_bessel_i};
pub use expansion::{
    expand_fd_terms, monomial_symmetric, TermGroup, TermGroupExpansion, MAX_EXPANSION_ORDER,
};
pub use lauricella::{
    euler_integral, lauricella_fd, lauricella_fd_euler, LauricellaArgs, TruncationPolicy,
};

/// Rising factorial `(a)_n = a (a+1) … (a+n-1)` as an explicit product, so
/// that `(−k)_n` is exactly zero for `n > k`.
pub fn pochhammer(a: f64, n: u32) -> f64 {
    let mut p = 1.0;
    for k in 0..n {
        p *= a + k as f64;
    }
    p
}

/// `true` when `a` is one of `0, −1, −2, …`.
pub fn is_nonpositive_integer(a: f64) -> bool {
    a <= 0.0 && a == crate::math::floor(a)
}
