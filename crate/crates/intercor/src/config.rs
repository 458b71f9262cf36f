//! Experiment specs: JSON file plus command-line overrides, resolved against
//! per-kind defaults taken from the figure captions.

use std::path::PathBuf;

use intercor_core::analytics::{CoverageQuery, InterfererShape, Variant};
use intercor_core::geometry::{hex_layout, DEFAULT_ALPHA};
use intercor_core::simulator::{Receiver, DEFAULT_TRIALS, MIN_TRIALS};
use serde::{Deserialize, Serialize};

use crate::error::RunError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    /// Coverage vs distance for several user shapes, small-scale fading only.
    Figure2,
    /// Coverage with η-µ fading and shadowing for several correlation pairs.
    Figure3,
    /// SISO rate (independent and correlated) against SIMO with cancellation.
    Figure4,
    /// MU-MIMO rate for independent and correlated interferers.
    Figure5,
    /// Majorization, ordering, appendix signs and convex-order battery.
    TheoremCheck,
    /// One user shape, one correlation pair, any receiver.
    Custom,
}

impl ExperimentKind {
    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::Figure2 => "figure2",
            ExperimentKind::Figure3 => "figure3",
            ExperimentKind::Figure4 => "figure4",
            ExperimentKind::Figure5 => "figure5",
            ExperimentKind::TheoremCheck => "theorem-check",
            ExperimentKind::Custom => "custom",
        }
    }
}

/// How the base correlation `ρ^{|p−q|}` enters the matrix `C`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum EntryConvention {
    /// `C_pq = √(ρ^{|p−q|})`, so fading powers correlate as `ρ^{|p−q|}`.
    #[default]
    Sqrt,
    /// `C_pq = ρ^{|p−q|}`.
    Direct,
}

/// Distances as `"a:b:n"` (n evenly spaced points from a to b) or a list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DistanceGrid {
    Range(String),
    List(Vec<f64>),
}

impl DistanceGrid {
    pub fn points(&self) -> Result<Vec<f64>, String> {
        match self {
            DistanceGrid::List(v) => Ok(v.clone()),
            DistanceGrid::Range(s) => parse_range(s),
        }
    }
}

fn parse_range(s: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, n] = parts.as_slice() else {
        return Err(format!("distance grid {s:?} is not of the form a:b:n"));
    };
    let bad = |what: &str| format!("distance grid {s:?}: cannot parse {what}");
    let a: f64 = a.trim().parse().map_err(|_| bad("start"))?;
    let b: f64 = b.trim().parse().map_err(|_| bad("end"))?;
    let n: usize = n.trim().parse().map_err(|_| bad("count"))?;
    Ok(match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n)
            .map(|i| {
                if i + 1 == n {
                    b
                } else {
                    a + (b - a) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    })
}

/// The default sweep: 20 points, 0.05 apart, ending at the cell edge.
pub fn default_distances() -> Vec<f64> {
    (1..=20).map(|i| i as f64 * 0.05).collect()
}

/// Everything a config file or the command line may set. Unset fields fall
/// back to the defaults of the experiment kind.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub kind: Option<ExperimentKind>,
    /// User Nakagami shape.
    pub m: Option<f64>,
    /// Interferer Nakagami shape.
    pub m_c: Option<f64>,
    /// Interferer η-µ `µ`; setting it (or `eta_i`) selects η-µ interferers.
    pub mu_c: Option<f64>,
    pub eta_i: Option<f64>,
    pub alpha: Option<f64>,
    pub t_db: Option<f64>,
    /// Small-scale fading correlation base.
    pub rho_s: Option<f64>,
    /// Shadowing correlation base (defaults to `rho_s`).
    pub rho_l: Option<f64>,
    pub sigma_db: Option<f64>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub distances: Option<DistanceGrid>,
    pub receiver: Option<Receiver>,
    /// User azimuth in degrees; 0 points at a corner of the serving cell.
    pub azimuth_deg: Option<f64>,
    pub entries: Option<EntryConvention>,
    pub out: Option<PathBuf>,
}

impl ExperimentSpec {
    /// Parses a JSON config, reporting the line and column of any error.
    pub fn from_json(text: &str) -> Result<Self, RunError> {
        serde_json::from_str(text)
            .map_err(|e| RunError::Config(format!("line {}, column {}: {e}", e.line(), e.column())))
    }

    pub fn load(path: &std::path::Path) -> Result<Self, RunError> {
        let text = std::fs::read_to_string(path).map_err(|e| RunError::io(path, e))?;
        Self::from_json(&text).map_err(|e| match e {
            RunError::Config(msg) => RunError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    /// Fields set in `flags` win over `self`.
    pub fn overridden_by(self, flags: ExperimentSpec) -> ExperimentSpec {
        ExperimentSpec {
            kind: flags.kind.or(self.kind),
            m: flags.m.or(self.m),
            m_c: flags.m_c.or(self.m_c),
            mu_c: flags.mu_c.or(self.mu_c),
            eta_i: flags.eta_i.or(self.eta_i),
            alpha: flags.alpha.or(self.alpha),
            t_db: flags.t_db.or(self.t_db),
            rho_s: flags.rho_s.or(self.rho_s),
            rho_l: flags.rho_l.or(self.rho_l),
            sigma_db: flags.sigma_db.or(self.sigma_db),
            trials: flags.trials.or(self.trials),
            seed: flags.seed.or(self.seed),
            distances: flags.distances.or(self.distances),
            receiver: flags.receiver.or(self.receiver),
            azimuth_deg: flags.azimuth_deg.or(self.azimuth_deg),
            entries: flags.entries.or(self.entries),
            out: flags.out.or(self.out),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum InterfererLaw {
    Nakagami { m: f64 },
    EtaMu { eta: f64, mu: f64 },
}

impl InterfererLaw {
    /// Shape of each gamma component before shadowing.
    pub fn component_shape(&self) -> f64 {
        match *self {
            InterfererLaw::Nakagami { m } => m,
            InterfererLaw::EtaMu { mu, .. } => mu,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationPair {
    pub rho_s: f64,
    pub rho_l: f64,
}

/// One curve of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Curve {
    pub user_m: f64,
    pub receiver: Receiver,
    /// `None` for independent interferers.
    pub pair: Option<CorrelationPair>,
}

/// A spec with every default filled in; embedded in every output file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResolvedConfig {
    pub kind: ExperimentKind,
    pub interferer: InterfererLaw,
    pub alpha: f64,
    pub t_db: f64,
    pub sigma_db: f64,
    pub curves: Vec<Curve>,
    pub trials: u64,
    pub seed: u64,
    pub distances: Vec<f64>,
    pub azimuth_deg: f64,
    pub entries: EntryConvention,
    pub out: PathBuf,
}

impl ResolvedConfig {
    /// The linear threshold; dB are converted here and nowhere else.
    pub fn threshold(&self) -> f64 {
        10f64.powf(self.t_db / 10.0)
    }

    pub fn azimuth(&self) -> f64 {
        self.azimuth_deg.to_radians()
    }

    pub fn json_path(&self) -> PathBuf {
        self.out.with_extension("json")
    }
}

struct KindDefaults {
    user_m: Vec<f64>,
    interferer: InterfererLaw,
    sigma_db: f64,
    pairs: Vec<CorrelationPair>,
    receiver: Receiver,
    trials: u64,
    distances: Vec<f64>,
}

fn pair(rho_s: f64, rho_l: f64) -> CorrelationPair {
    CorrelationPair { rho_s, rho_l }
}

fn kind_defaults(kind: ExperimentKind) -> KindDefaults {
    let nakagami = InterfererLaw::Nakagami { m: 1.0 };
    let base = KindDefaults {
        user_m: vec![1.0],
        interferer: nakagami,
        sigma_db: 0.0,
        pairs: Vec::new(),
        receiver: Receiver::Siso,
        trials: DEFAULT_TRIALS,
        distances: default_distances(),
    };
    match kind {
        ExperimentKind::Figure2 => KindDefaults {
            user_m: vec![0.5, 1.0, 3.0],
            pairs: vec![pair(0.8, 0.8)],
            ..base
        },
        ExperimentKind::Figure3 => KindDefaults {
            interferer: InterfererLaw::EtaMu { eta: 2.0, mu: 1.0 },
            sigma_db: 10.0,
            pairs: vec![pair(0.6, 0.6), pair(0.7, 0.9), pair(0.8, 0.95)],
            ..base
        },
        ExperimentKind::Figure4 => KindDefaults {
            sigma_db: 10.0,
            pairs: vec![pair(0.6, 0.6), pair(0.7, 0.9)],
            ..base
        },
        ExperimentKind::Figure5 => KindDefaults {
            sigma_db: 10.0,
            pairs: vec![pair(0.8, 0.95), pair(0.6, 0.6)],
            receiver: Receiver::MuMimo,
            ..base
        },
        ExperimentKind::TheoremCheck => KindDefaults {
            user_m: vec![0.5],
            pairs: vec![pair(0.6, 0.6)],
            trials: 1_000_000,
            distances: vec![0.7],
            ..base
        },
        ExperimentKind::Custom => base,
    }
}

/// Fills every unset field from the defaults of the spec's kind.
pub fn resolve(spec: &ExperimentSpec) -> Result<ResolvedConfig, RunError> {
    let kind = spec
        .kind
        .ok_or_else(|| RunError::Config("experiment kind is not set".into()))?;
    let d = kind_defaults(kind);

    let user_m = spec.m.map_or(d.user_m, |m| vec![m]);
    let interferer = match (spec.eta_i, spec.mu_c, spec.m_c, d.interferer) {
        (None, None, Some(m), _) => InterfererLaw::Nakagami { m },
        (None, None, None, law) => law,
        (eta, mu, _, law) => {
            let (eta0, mu0) = match law {
                InterfererLaw::EtaMu { eta, mu } => (eta, mu),
                InterfererLaw::Nakagami { .. } => (1.0, 1.0),
            };
            InterfererLaw::EtaMu {
                eta: eta.unwrap_or(eta0),
                mu: mu.unwrap_or(mu0),
            }
        }
    };
    let pairs = match (spec.rho_s, spec.rho_l) {
        (None, None) => d.pairs,
        (rho_s, rho_l) => {
            let rho_s = rho_s
                .or(d.pairs.first().map(|p| p.rho_s))
                .or(rho_l)
                .unwrap_or(0.0);
            vec![pair(rho_s, rho_l.unwrap_or(rho_s))]
        }
    };
    let receiver = spec.receiver.unwrap_or(d.receiver);

    let mut curves = Vec::new();
    for &m in &user_m {
        curves.push(Curve {
            user_m: m,
            receiver,
            pair: None,
        });
        for p in &pairs {
            curves.push(Curve {
                user_m: m,
                receiver,
                pair: Some(*p),
            });
        }
        if kind == ExperimentKind::Figure4 && spec.receiver.is_none() {
            curves.push(Curve {
                user_m: m,
                receiver: Receiver::SimoLmmse,
                pair: None,
            });
        }
    }

    let distances = match &spec.distances {
        Some(grid) => grid.points().map_err(RunError::Config)?,
        None => d.distances,
    };
    Ok(ResolvedConfig {
        kind,
        interferer,
        alpha: spec.alpha.unwrap_or(DEFAULT_ALPHA),
        t_db: spec.t_db.unwrap_or(3.0),
        sigma_db: spec.sigma_db.unwrap_or(d.sigma_db),
        curves,
        trials: spec.trials.unwrap_or(d.trials),
        seed: spec.seed.unwrap_or(1),
        distances,
        azimuth_deg: spec.azimuth_deg.unwrap_or(0.0),
        entries: spec.entries.unwrap_or_default(),
        out: spec
            .out
            .clone()
            .unwrap_or_else(|| PathBuf::from(format!("results/{}.csv", kind.name()))),
    })
}

fn positive(name: &str, v: f64, out: &mut Vec<String>) {
    if !(v > 0.0 && v.is_finite()) {
        out.push(format!("{name} = {v}: must be positive and finite"));
    }
}

/// Invariant violations of a spec, without running anything. Empty means
/// the spec is runnable.
pub fn validate_config(spec: &ExperimentSpec) -> Vec<String> {
    let cfg = match resolve(spec) {
        Ok(cfg) => cfg,
        Err(RunError::Config(msg)) => return vec![msg],
        Err(e) => return vec![e.to_string()],
    };
    let mut out = Vec::new();
    let mut seen_m = Vec::new();
    for c in &cfg.curves {
        if !seen_m.contains(&c.user_m.to_bits()) {
            seen_m.push(c.user_m.to_bits());
            positive("m", c.user_m, &mut out);
        }
    }
    match cfg.interferer {
        InterfererLaw::Nakagami { m } => positive("m_c", m, &mut out),
        InterfererLaw::EtaMu { eta, mu } => {
            positive("eta_i", eta, &mut out);
            positive("mu_c", mu, &mut out);
        }
    }
    if !(cfg.alpha >= 2.0 && cfg.alpha.is_finite()) {
        out.push(format!(
            "alpha = {}: path-loss exponent must be at least 2",
            cfg.alpha
        ));
    }
    if !(cfg.sigma_db >= 0.0 && cfg.sigma_db.is_finite()) {
        out.push(format!(
            "sigma_db = {}: spread must be nonnegative",
            cfg.sigma_db
        ));
    }
    let mut seen_pair = Vec::new();
    for p in cfg.curves.iter().filter_map(|c| c.pair) {
        if seen_pair.contains(&p) {
            continue;
        }
        seen_pair.push(p);
        for (name, rho) in [("rho_s", p.rho_s), ("rho_l", p.rho_l)] {
            if !(0.0..=1.0).contains(&rho) {
                out.push(format!("{name} = {rho}: correlation out of range [0, 1]"));
            }
        }
    }
    if cfg.trials < MIN_TRIALS {
        out.push(format!("trials = {}: below minimum 10³", cfg.trials));
    }
    if cfg.distances.is_empty() {
        out.push("distance grid is empty".into());
    }
    for &d in &cfg.distances {
        if !(d > 0.0 && d <= 1.0) {
            out.push(format!("distance {d} outside (0, 1]"));
        }
    }
    if !cfg.t_db.is_finite() {
        out.push(format!("t_db = {}: threshold must be finite", cfg.t_db));
    } else if out.is_empty() {
        lauricella_argument_check(&cfg, &mut out);
    }
    out
}

// x_i = 1/(T r^α m λ_i + 1) must stay below one in floating point, or the
// closed form degenerates.
fn lauricella_argument_check(cfg: &ResolvedConfig, out: &mut Vec<String>) {
    let Ok(layout) = hex_layout(1.0).and_then(|l| l.with_alpha(cfg.alpha)) else {
        return;
    };
    for &d in &cfg.distances {
        let Ok(placed) = layout.place_user(d, cfg.azimuth()) else {
            continue;
        };
        let (Ok(r), Ok(weights)) = (placed.user_distance(), placed.interferer_gains()) else {
            continue;
        };
        for c in &cfg.curves {
            let q = CoverageQuery {
                m: c.user_m,
                t: cfg.threshold(),
                r,
                alpha: cfg.alpha,
                weights: weights.clone(),
                interferer_shape: InterfererShape::Common(1.0),
                variant: Variant::NakagamiIndep,
            };
            if q.lauricella_x().iter().any(|&x| x >= 1.0) {
                out.push(format!(
                    "t_db = {}: Lauricella arguments round to 1 (x ≥ 1) at distance {d}",
                    cfg.t_db
                ));
                return;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn figure2() -> ExperimentSpec {
        ExperimentSpec {
            kind: Some(ExperimentKind::Figure2),
            ..Default::default()
        }
    }

    #[test]
    fn figure2_defaults_follow_the_caption() {
        let cfg = resolve(&figure2()).unwrap();
        assert_eq!(cfg.interferer, InterfererLaw::Nakagami { m: 1.0 });
        assert_eq!(cfg.alpha, 2.5);
        assert_eq!(cfg.t_db, 3.0);
        assert_eq!(cfg.curves.len(), 6);
        assert_eq!(cfg.distances.len(), 20);
        assert!(validate_config(&figure2()).is_empty());
    }

    #[test]
    fn flags_win_over_the_file() {
        let file = ExperimentSpec {
            m: Some(2.0),
            seed: Some(5),
            ..figure2()
        };
        let flags = ExperimentSpec {
            seed: Some(9),
            ..Default::default()
        };
        let merged = file.overridden_by(flags);
        assert_eq!(merged.seed, Some(9));
        assert_eq!(merged.m, Some(2.0));
        assert_eq!(merged.kind, Some(ExperimentKind::Figure2));
    }

    #[test]
    fn range_grid() {
        let grid = parse_range("0.2:0.6:3").unwrap();
        assert_eq!(grid.len(), 3);
        assert!((grid[1] - 0.4).abs() < 1e-15);
        assert_eq!((grid[0], grid[2]), (0.2, 0.6));
        assert!(parse_range("0.2:0.6").is_err());
        assert!(parse_range("a:0.6:3").is_err());
    }

    #[test]
    fn diagnostics() {
        let bad_rho = ExperimentSpec {
            rho_s: Some(1.2),
            ..figure2()
        };
        let d = validate_config(&bad_rho);
        assert!(
            d.iter().any(|s| s.contains("correlation out of range")),
            "{d:?}"
        );

        let few = ExperimentSpec {
            trials: Some(10),
            ..figure2()
        };
        let d = validate_config(&few);
        assert!(d.iter().any(|s| s.contains("below minimum 10³")), "{d:?}");

        let far = ExperimentSpec {
            distances: Some(DistanceGrid::List(vec![0.5, 1.5])),
            ..figure2()
        };
        assert!(validate_config(&far)
            .iter()
            .any(|s| s.contains("outside (0, 1]")));

        let tiny = ExperimentSpec {
            t_db: Some(-400.0),
            ..figure2()
        };
        assert!(validate_config(&tiny).iter().any(|s| s.contains("x ≥ 1")));
    }

    #[test]
    fn eta_mu_flags_switch_the_law() {
        let spec = ExperimentSpec {
            kind: Some(ExperimentKind::Custom),
            mu_c: Some(1.5),
            ..Default::default()
        };
        assert_eq!(
            resolve(&spec).unwrap().interferer,
            InterfererLaw::EtaMu { eta: 1.0, mu: 1.5 }
        );
    }

    #[test]
    fn parse_errors_carry_positions() {
        let err = ExperimentSpec::from_json("{\n  \"kind\": \"figure2\",\n  \"m\": oops\n}")
            .unwrap_err()
            .to_string();
        assert!(err.contains("line 3"), "{err}");
        let err = ExperimentSpec::from_json("{\"kind\": \"figure2\", \"bogus\": 1}")
            .unwrap_err()
            .to_string();
        assert!(err.contains("bogus"), "{err}");
    }
}
