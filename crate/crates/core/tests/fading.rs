use intercor_core::fading::{
    composite_correlation, composite_params, decompose_eta_mu, eta_mu_pdf, EtaMu, FadingSpec,
};
use intercor_core::quadrature::{integrate, Tolerance};
use intercor_core::random::RandomStream;
use proptest::prelude::*;

fn tol() -> Tolerance {
    Tolerance {
        absolute: 1e-13,
        relative: 1e-11,
        max_intervals: 4000,
    }
}

/// `∫₀^∞ x^k f(x) dx`, split at 1 and mapped to a finite range above it.
fn moment(p: &EtaMu, k: i32) -> f64 {
    let f = |x: f64| x.powi(k) * eta_mu_pdf(p, x).unwrap();
    let head = integrate(f, 0.0, 1.0, tol()).value;
    let tail = integrate(|u: f64| f(1.0 / u) / (u * u), 1e-9, 1.0, tol()).value;
    head + tail
}

#[test]
fn pdf_normalization_grid() {
    for &eta in &[0.2, 0.5, 1.0, 2.0, 5.0] {
        for &mu in &[0.6, 1.0, 1.5, 3.0] {
            let p = EtaMu::new(eta, mu).unwrap();
            let mass = moment(&p, 0);
            let mean = moment(&p, 1);
            assert!((mass - 1.0).abs() < 1e-6, "η={eta} µ={mu}: mass {mass}");
            assert!((mean - 1.0).abs() < 1e-6, "η={eta} µ={mu}: mean {mean}");
            let var = moment(&p, 2) - 1.0;
            let expected = (1.0 + eta * eta) / (mu * (1.0 + eta) * (1.0 + eta));
            assert!(
                (var - expected).abs() < 1e-6,
                "η={eta} µ={mu}: variance {var}"
            );
        }
    }
}

proptest! {
    #[test]
    fn eta_and_its_inverse_give_one_law(eta in 0.05f64..20.0, mu in 0.3f64..4.0, x in 0.01f64..6.0) {
        let a = eta_mu_pdf(&EtaMu::new(eta, mu).unwrap(), x).unwrap();
        let b = eta_mu_pdf(&EtaMu::new(1.0 / eta, mu).unwrap(), x).unwrap();
        prop_assert!((a - b).abs() <= 1e-10 * a.max(1e-300));
    }

    #[test]
    fn decomposition_has_unit_mean_and_matching_variance(eta in 0.05f64..20.0, mu in 0.3f64..4.0) {
        let pair = decompose_eta_mu(&EtaMu::new(eta, mu).unwrap());
        prop_assert!((pair.mean() - 1.0).abs() < 1e-13);
        // Var = (1 + (H/h)²) / (2µ) = (1 + η²) / (µ (1 + η)²).
        let var = pair.shape1 * pair.scale1 * pair.scale1 + pair.shape2 * pair.scale2 * pair.scale2;
        let expected = (1.0 + eta * eta) / (mu * (1.0 + eta) * (1.0 + eta));
        prop_assert!((var - expected).abs() < 1e-12);
    }

    #[test]
    fn composite_correlation_stays_in_unit_interval(
        rs in 0.0f64..=1.0, rl in 0.0f64..=1.0, m in 0.2f64..5.0, sigma in 0.0f64..15.0,
    ) {
        let r = composite_correlation(rs, rl, m, sigma);
        prop_assert!((-1e-15..=1.0 + 1e-15).contains(&r));
        prop_assert!(r <= rs.max(rl) + 1e-12);
    }
}

#[test]
fn decomposition_sampler_matches_density() {
    // Kolmogorov–Smirnov distance between 10⁵ draws of the two-gamma sum and
    // the CDF obtained by integrating the density.
    let p = EtaMu::new(2.0, 1.0).unwrap();
    let sampler = FadingSpec::EtaMu(p).sampler();
    let mut rng = RandomStream::new(77);
    let mut draws: Vec<f64> = (0..100_000).map(|_| sampler.sample(&mut rng)).collect();
    draws.sort_by(f64::total_cmp);
    let n = draws.len() as f64;
    let mut cdf = 0.0;
    let mut prev = 0.0;
    let mut ks: f64 = 0.0;
    for (i, &x) in draws.iter().enumerate() {
        cdf += integrate(|t| eta_mu_pdf(&p, t).unwrap(), prev, x, tol()).value;
        prev = x;
        ks = ks
            .max((cdf - i as f64 / n).abs())
            .max((cdf - (i + 1) as f64 / n).abs());
    }
    assert!(ks < 0.01, "KS distance {ks}");
}

#[test]
fn composite_reduces_to_nakagami_without_shadowing() {
    for &m in &[0.5, 1.0, 2.5] {
        let (beta, gamma) = composite_params(m, 0.0).unwrap();
        assert!((beta - m).abs() < 1e-12);
        assert!((beta * gamma - 1.0).abs() < 1e-12);
        let (beta, _) = composite_params(m, 1e-4).unwrap();
        assert!((beta - m).abs() < 1e-6);
    }
    // Shadowing only adds variability: β decreases with σ.
    let betas: Vec<f64> = [0.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|&s| composite_params(1.0, s).unwrap().0)
        .collect();
    assert!(betas.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn nakagami_sampler_moments() {
    let spec = FadingSpec::nakagami(2.5).unwrap();
    let sampler = spec.sampler();
    let mut rng = RandomStream::new(3);
    let n = 200_000;
    let (mut s, mut s2) = (0.0, 0.0);
    for _ in 0..n {
        let x = sampler.sample(&mut rng);
        s += x;
        s2 += x * x;
    }
    let mean = s / n as f64;
    let var = s2 / n as f64 - mean * mean;
    // Mean 1 (SE ≈ 0.0014), variance 1/m.
    assert!((mean - 1.0).abs() < 0.006, "{mean}");
    assert!((var - 0.4).abs() < 0.01, "{var}");
}
