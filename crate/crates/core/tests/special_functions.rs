use intercor_core::special::{
    bessel_i_scaled, euler_integral, expand_fd_terms, lauricella_fd, monomial_symmetric,
    pochhammer, LauricellaArgs, TruncationPolicy,
};
use proptest::prelude::*;

/// Direct multi-index sum of `F_D` over `|i| ≤ max_total`, independent of the
/// degree recursion used by the library.
fn brute_force_fd(a: f64, b: &[f64], c: f64, x: &[f64], max_total: usize) -> f64 {
    fn walk(
        k: usize,
        left: usize,
        idx: &mut Vec<usize>,
        a: f64,
        b: &[f64],
        c: f64,
        x: &[f64],
        sum: &mut f64,
    ) {
        if k == b.len() {
            let total: usize = idx.iter().sum();
            let mut term = 1.0;
            for s in 0..total {
                term *= (a + s as f64) / (c + s as f64);
            }
            for (j, &i) in idx.iter().enumerate() {
                for s in 0..i {
                    term *= (b[j] + s as f64) * x[j] / (s as f64 + 1.0);
                }
            }
            *sum += term;
            return;
        }
        for i in 0..=left {
            idx.push(i);
            walk(k + 1, left - i, idx, a, b, c, x, sum);
            idx.pop();
        }
    }
    let mut sum = 0.0;
    walk(0, max_total, &mut Vec::new(), a, b, c, x, &mut sum);
    sum
}

fn gauss_2f1(a: f64, b: f64, c: f64, x: f64) -> f64 {
    let (mut term, mut sum) = (1.0, 1.0);
    for k in 0..200_000 {
        let k = k as f64;
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * x;
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn terminating_series_matches_multi_index_sum(
        m in 1u32..=5,
        n in 1usize..=4,
        seed_b in proptest::collection::vec(0.2f64..3.0, 4),
        seed_x in proptest::collection::vec(0.0f64..1.0, 4),
    ) {
        let a = 1.0 - m as f64;
        let b = &seed_b[..n];
        let x = &seed_x[..n];
        let c = b.iter().sum::<f64>() + 1.0;
        let args = LauricellaArgs::new(a, b.to_vec(), c, x.to_vec()).unwrap();
        let series = lauricella_fd(&args, &TruncationPolicy::default()).unwrap();
        let oracle = brute_force_fd(a, b, c, x, (m - 1) as usize);
        prop_assert!((series - oracle).abs() <= 1e-12 * oracle.abs().max(1.0),
            "{} vs {}", series, oracle);
    }

    #[test]
    fn single_variable_is_gauss(
        a in -3.0f64..3.0,
        b in 0.1f64..4.0,
        c in 0.5f64..6.0,
        x in -0.9f64..0.9,
    ) {
        let args = LauricellaArgs::new(a, vec![b], c, vec![x]).unwrap();
        let fd = lauricella_fd(&args, &TruncationPolicy::default().with_max_degree(2000)).unwrap();
        let oracle = gauss_2f1(a, b, c, x);
        prop_assert!((fd - oracle).abs() <= 1e-10 * oracle.abs().max(1.0), "{} vs {}", fd, oracle);
    }

    #[test]
    fn grouped_expansion_matches_truncated_sum(
        a in -2.5f64..1.0,
        b in 0.5f64..2.0,
        n in 1usize..=4,
        seed_x in proptest::collection::vec(0.0f64..0.6, 4),
        order in 1usize..=6,
    ) {
        let x = &seed_x[..n];
        let c = n as f64 * b + 1.0;
        let grouped = expand_fd_terms(a, b, c, n, order).evaluate(x).unwrap();
        let oracle = brute_force_fd(a, &vec![b; n], c, x, order);
        prop_assert!((grouped - oracle).abs() <= 1e-12 * oracle.abs().max(1.0));
    }

    #[test]
    fn continued_euler_integral_matches_series(
        a in -2.9f64..0.9,
        extra in 0.5f64..5.0,
        seed_b in proptest::collection::vec(0.5f64..2.0, 3),
        seed_x in proptest::collection::vec(0.05f64..0.7, 3),
    ) {
        prop_assume!((a - a.round()).abs() > 0.05);
        let c = a.max(0.0) + extra;
        let args = LauricellaArgs::new(a, seed_b.clone(), c, seed_x.clone()).unwrap();
        let series = lauricella_fd(&args, &TruncationPolicy::default()).unwrap();
        let v: Vec<f64> = seed_x.iter().map(|x| 1.0 / x - 1.0).collect();
        let integral = euler_integral(a, c, &seed_b, &v).unwrap();
        // Γ(a) carries the sign (−1)^⌈−a⌉ for negative a.
        let sign = if a > 0.0 || (a.floor() as i64) % 2 == 0 { 1.0 } else { -1.0 };
        let log_norm = ln_gamma(c) - ln_gamma(a) - ln_gamma(c - a)
            - seed_b.iter().zip(&seed_x).map(|(b, x)| b * x.ln()).sum::<f64>();
        let via = sign * log_norm.exp() * integral;
        prop_assert!((via / series - 1.0).abs() < 1e-8, "{} vs {}", via, series);
    }

    #[test]
    fn pochhammer_is_gamma_ratio(a in 0.1f64..20.0, n in 0u32..15) {
        let direct = pochhammer(a, n);
        let via = (ln_gamma(a + n as f64) - ln_gamma(a)).exp();
        prop_assert!((direct / via - 1.0).abs() < 1e-11);
    }

    #[test]
    fn bessel_three_term_recurrence(nu in 1.0f64..6.0, z in 0.05f64..80.0) {
        // I_{ν−1} − I_{ν+1} = (2ν/z) I_ν, also for the e^{−z}-scaled values.
        let lhs = bessel_i_scaled(nu - 1.0, z) - bessel_i_scaled(nu + 1.0, z);
        let rhs = 2.0 * nu / z * bessel_i_scaled(nu, z);
        prop_assert!((lhs - rhs).abs() <= 1e-9 * rhs.abs().max(1e-300), "{} vs {}", lhs, rhs);
    }
}

#[test]
fn monomial_symmetric_against_enumeration() {
    let x = [0.3, 0.5, 0.7, 0.2];
    // m_(2,1)(x) = Σ_{i≠j} x_i² x_j.
    let mut oracle = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            if i != j {
                oracle += x[i] * x[i] * x[j];
            }
        }
    }
    assert!((monomial_symmetric(&[2, 1], &x) - oracle).abs() < 1e-15);
    // m_(1,1)(x) = e_2(x).
    let mut e2 = 0.0;
    for i in 0..4 {
        for j in i + 1..4 {
            e2 += x[i] * x[j];
        }
    }
    assert!((monomial_symmetric(&[1, 1], &x) - e2).abs() < 1e-15);
}

#[test]
fn slow_series_near_unit_argument_uses_budget_error() {
    let args = LauricellaArgs::new(-0.7, vec![1.0; 5], 6.0, vec![0.9999; 5]).unwrap();
    assert!(lauricella_fd(&args, &TruncationPolicy::default()).is_err());
}
