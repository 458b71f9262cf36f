//! Turning a resolved config into scenarios and running them.

use intercor_core::analytics::{
    compare_appendix_series, coverage_probability, ComparisonReport, CoverageQuery,
    InterfererShape, Variant,
};
use intercor_core::correlation::{
    build_correlation, is_schur_convex_witness, weighted_spectrum, CorrelationModel,
    CorrelationStructure, WitnessReport,
};
use intercor_core::fading::{composite_correlation, FadingSpec};
use intercor_core::geometry::hex_layout;
use intercor_core::random::RandomStream;
use intercor_core::simulator::{
    verify_convex_order, ConvexFn, OrderReport, Receiver, ScenarioConfig,
};
use serde::{Deserialize, Serialize};

use crate::config::{CorrelationPair, Curve, EntryConvention, InterfererLaw, ResolvedConfig};
use crate::error::RunError;
use crate::runner::run_parallel;

/// One output row: a distance point of one curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub distance: f64,
    pub variant: String,
    pub coverage: f64,
    pub coverage_se: f64,
    pub rate_nats: f64,
    pub rate_se: f64,
    pub analytic_coverage: Option<f64>,
    pub seed: u64,
}

pub fn receiver_name(r: Receiver) -> &'static str {
    match r {
        Receiver::Siso => "siso",
        Receiver::SimoLmmse => "simo",
        Receiver::MuMimo => "mumimo",
    }
}

/// Compact curve label such as `m1_mumimo_corr_rs0.8_rl0.95`.
pub fn curve_label(curve: &Curve, shadowed: bool) -> String {
    let head = format!("m{}_{}", curve.user_m, receiver_name(curve.receiver));
    match curve.pair {
        None => format!("{head}_indep"),
        Some(p) if shadowed => format!("{head}_corr_rs{}_rl{}", p.rho_s, p.rho_l),
        Some(p) => format!("{head}_corr_rs{}", p.rho_s),
    }
}

/// Interferer law with shadowing folded in when `sigma_db > 0`.
pub fn interferer_fading(cfg: &ResolvedConfig) -> Result<FadingSpec, RunError> {
    let spec = match (cfg.interferer, cfg.sigma_db > 0.0) {
        (InterfererLaw::Nakagami { m }, false) => FadingSpec::nakagami(m),
        (InterfererLaw::Nakagami { m }, true) => FadingSpec::composite(m, cfg.sigma_db),
        (InterfererLaw::EtaMu { eta, mu }, false) => FadingSpec::eta_mu(eta, mu),
        (InterfererLaw::EtaMu { eta, mu }, true) => {
            FadingSpec::composite_eta_mu(eta, mu, cfg.sigma_db)
        }
    }?;
    Ok(spec)
}

/// Site-level correlation over the 18 interferers. With shadowing the base
/// per lag is the correlation of the composite powers.
pub fn correlation_model(
    cfg: &ResolvedConfig,
    pair: CorrelationPair,
) -> Result<CorrelationModel, RunError> {
    let shape = cfg.interferer.component_shape();
    let n = intercor_core::geometry::INTERFERER_COUNT;
    let model = CorrelationModel::from_lag_fn(n, CorrelationStructure::Full, |lag| {
        let k = lag as f64;
        let power =
            composite_correlation(pair.rho_s.powf(k), pair.rho_l.powf(k), shape, cfg.sigma_db);
        match cfg.entries {
            EntryConvention::Sqrt => power,
            EntryConvention::Direct => power * power,
        }
    })?;
    Ok(model)
}

/// The scenario for one curve at one distance.
pub fn scenario(
    cfg: &ResolvedConfig,
    curve: &Curve,
    distance: f64,
    seed: u64,
) -> Result<ScenarioConfig, RunError> {
    let layout = hex_layout(1.0)?
        .with_alpha(cfg.alpha)?
        .place_user(distance, cfg.azimuth())?;
    Ok(ScenarioConfig {
        layout,
        user_fading: FadingSpec::nakagami(curve.user_m)?,
        interferer_fading: interferer_fading(cfg)?,
        corr: curve.pair.map(|p| correlation_model(cfg, p)).transpose()?,
        trials: cfg.trials,
        seed,
        receiver: curve.receiver,
        threshold: cfg.threshold(),
    })
}

/// Seed of distance point `index`; shared by all curves so curves compare
/// under common random numbers.
pub fn point_seed(base: u64, index: usize) -> u64 {
    base.wrapping_add(index as u64)
}

/// Every curve at every distance.
pub fn run_sweep(cfg: &ResolvedConfig) -> Result<Vec<Row>, RunError> {
    let shadowed = cfg.sigma_db > 0.0;
    let mut rows = Vec::with_capacity(cfg.curves.len() * cfg.distances.len());
    for curve in &cfg.curves {
        let label = curve_label(curve, shadowed);
        for (i, &d) in cfg.distances.iter().enumerate() {
            let seed = point_seed(cfg.seed, i);
            let r = run_parallel(&scenario(cfg, curve, d, seed)?)?;
            rows.push(Row {
                distance: d,
                variant: label.clone(),
                coverage: r.coverage,
                coverage_se: r.coverage_se,
                rate_nats: r.rate_nats,
                rate_se: r.rate_se,
                analytic_coverage: r.analytic_coverage,
                seed,
            });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomInstances {
    pub instances: usize,
    pub majorization_failures: usize,
    /// Instances with correlated coverage below independent − 1e−10.
    pub correlated_below: usize,
    pub correlated_above: usize,
    pub worst_shortfall: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub m: f64,
    pub rho: f64,
    pub distance: f64,
    pub checks: Vec<Check>,
    pub random_instances: RandomInstances,
    pub schur_witness: WitnessReport,
    pub appendix: ComparisonReport,
    pub convex_order: OrderReport,
}

impl TheoremReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

pub const RANDOM_INSTANCES: usize = 500;
pub const ORDERING_SLACK: f64 = 1e-10;

/// Analytic ordering and majorization on random instances: `N ≤ 6`,
/// `ρ ∈ (0, 1)`, weights in `(0, 3)`, thresholds in `(0.1, 10)`, distances
/// in `(0.2, 1)`.
pub fn random_instances(m: f64, instances: usize, seed: u64) -> Result<RandomInstances, RunError> {
    let mut rng = RandomStream::new(seed);
    let mut out = RandomInstances {
        instances,
        majorization_failures: 0,
        correlated_below: 0,
        correlated_above: 0,
        worst_shortfall: 0.0,
    };
    for _ in 0..instances {
        let n = 1 + rng.below(6);
        let w: Vec<f64> = (0..n).map(|_| 3.0 * rng.uniform_open()).collect();
        let rho = rng.uniform_open();
        let t = 0.1 + 9.9 * rng.uniform();
        let r = 0.2 + 0.8 * rng.uniform_open();
        let corr = build_correlation(n, rho, CorrelationStructure::Full)?;
        let spec = weighted_spectrum(&w, &corr)?;
        if !spec.hats_majorize() {
            out.majorization_failures += 1;
        }
        let q = |weights: Vec<f64>, variant| CoverageQuery {
            m,
            t,
            r,
            alpha: 2.5,
            weights,
            interferer_shape: InterfererShape::Common(1.0),
            variant,
        };
        let ci = coverage_probability(&q(w, Variant::NakagamiIndep))?;
        let cc = coverage_probability(&q(spec.lambda_hats, Variant::NakagamiCorr))?;
        if cc < ci - ORDERING_SLACK {
            out.correlated_below += 1;
            out.worst_shortfall = out.worst_shortfall.max(ci - cc);
        } else if cc > ci + ORDERING_SLACK {
            out.correlated_above += 1;
        }
    }
    Ok(out)
}

/// The analytic and Monte Carlo checks of the ordering results for the
/// first curve's `m` and correlation pair at the first distance.
pub fn run_theorem_check(cfg: &ResolvedConfig) -> Result<TheoremReport, RunError> {
    let m = cfg.curves.first().map_or(0.5, |c| c.user_m);
    let pair = cfg
        .curves
        .iter()
        .find_map(|c| c.pair)
        .unwrap_or(CorrelationPair {
            rho_s: 0.6,
            rho_l: 0.6,
        });
    let distance = cfg.distances.first().copied().unwrap_or(0.7);
    let mut checks = Vec::new();

    let random = random_instances(m, RANDOM_INSTANCES, cfg.seed)?;
    checks.push(Check {
        name: "majorization".into(),
        pass: random.majorization_failures == 0,
        detail: format!(
            "{} of {} random instances without λ̂ ≻ λ",
            random.majorization_failures, random.instances
        ),
    });
    checks.push(Check {
        name: "coverage_ordering".into(),
        // Only guaranteed for m ≤ 1; for larger m the counts are reported.
        pass: m > 1.0 || random.correlated_below == 0,
        detail: format!(
            "correlated below independent in {}, above in {} of {} instances (m = {m})",
            random.correlated_below, random.correlated_above, random.instances
        ),
    });

    let mut rng = RandomStream::split(cfg.seed, 1);
    let schur = is_schur_convex_witness(cfg.threshold(), 1.0, 18, 2000, &mut rng);
    checks.push(Check {
        name: "schur_witness".into(),
        pass: schur.violations == 0,
        detail: format!("{} violations in {} pairs", schur.violations, schur.trials),
    });

    // Unshadowed, unit-shape interferers for the series and battery.
    let plain = ResolvedConfig {
        sigma_db: 0.0,
        interferer: InterfererLaw::Nakagami { m: 1.0 },
        ..cfg.clone()
    };
    let indep_curve = Curve {
        user_m: m,
        receiver: Receiver::Siso,
        pair: None,
    };
    let corr_curve = Curve {
        pair: Some(pair),
        ..indep_curve
    };
    let si = scenario(&plain, &indep_curve, distance, cfg.seed)?;
    let sc = scenario(&plain, &corr_curve, distance, cfg.seed)?;
    let (pi, pc) = (si.prepare()?, sc.prepare()?);
    let (Some(qi), Some(qc)) = (pi.coverage_query(), pc.coverage_query()) else {
        return Err(RunError::Config(
            "no closed form for this configuration".into(),
        ));
    };
    let appendix = compare_appendix_series(qi, qc, intercor_core::special::MAX_EXPANSION_ORDER)?;
    let (pass, expectation) = if m <= 1.0 {
        (appendix.all_nonnegative(), "all coefficients nonnegative")
    } else {
        (
            appendix.alternates_by_order(),
            "signs alternate with total order",
        )
    };
    checks.push(Check {
        name: "appendix_signs".into(),
        pass,
        detail: format!("{} groups, expected {expectation}", appendix.groups.len()),
    });

    let convex = verify_convex_order(&si, &sc, &ConvexFn::standard_battery(), cfg.trials)?;
    let failed: Vec<&str> = convex
        .entries
        .iter()
        .filter(|e| !e.pass)
        .map(|e| e.function.as_str())
        .collect();
    checks.push(Check {
        name: "convex_order".into(),
        pass: failed.is_empty(),
        detail: if failed.is_empty() {
            format!(
                "{} functions pass at {} draws",
                convex.entries.len(),
                convex.trials
            )
        } else {
            format!("violations: {}", failed.join(", "))
        },
    });

    Ok(TheoremReport {
        m,
        rho: pair.rho_s,
        distance,
        checks,
        random_instances: random,
        schur_witness: schur,
        appendix,
        convex_order: convex,
    })
}
