//! Experiment runner on top of `intercor-core`: config files, parallel
//! sweeps, CSV/JSON output and the theorem-check report.

pub mod config;
pub mod error;
pub mod experiment;
pub mod output;
pub mod runner;

use intercor_core::geometry::hex_layout;
use serde::Serialize;

pub use config::{resolve, validate_config, ExperimentKind, ExperimentSpec, ResolvedConfig};
pub use error::RunError;
pub use experiment::{run_sweep, run_theorem_check, Row, TheoremReport};

#[derive(Debug)]
pub enum Outcome {
    Sweep {
        config: ResolvedConfig,
        rows: Vec<Row>,
    },
    TheoremCheck {
        config: ResolvedConfig,
        report: TheoremReport,
    },
}

impl Outcome {
    pub fn config(&self) -> &ResolvedConfig {
        match self {
            Outcome::Sweep { config, .. } | Outcome::TheoremCheck { config, .. } => config,
        }
    }
}

/// Validates, runs and writes the output files of one experiment.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Outcome, RunError> {
    let problems = validate_config(spec);
    if !problems.is_empty() {
        return Err(RunError::Invalid(problems));
    }
    let cfg = resolve(spec)?;
    if cfg.kind == ExperimentKind::TheoremCheck {
        let report = run_theorem_check(&cfg)?;
        output::write_theorem_json(&cfg.json_path(), &cfg, &report)?;
        return Ok(Outcome::TheoremCheck {
            config: cfg,
            report,
        });
    }
    let rows = run_sweep(&cfg)?;
    output::write_csv(&cfg.out, &cfg, &rows)?;
    output::write_sweep_json(&cfg.json_path(), &cfg, &rows)?;
    Ok(Outcome::Sweep { config: cfg, rows })
}

#[derive(Debug, Serialize)]
pub struct LayoutSite {
    pub index: usize,
    pub x: f64,
    pub y: f64,
    /// Distance to the user; `None` without a user.
    pub distance: Option<f64>,
    pub role: &'static str,
}

/// Site coordinates (in units of the cell inradius) and, with a user, the
/// distance to each site.
pub fn layout_sites(distance: Option<f64>, azimuth_deg: f64) -> Result<Vec<LayoutSite>, RunError> {
    let mut layout = hex_layout(1.0)?;
    if let Some(d) = distance {
        layout = layout.place_user(d, azimuth_deg.to_radians())?;
    }
    let closest = layout.closest_interferer().ok();
    let user = layout.user.as_ref();
    Ok(layout
        .bs_positions
        .iter()
        .enumerate()
        .map(|(i, p)| LayoutSite {
            index: i,
            x: p[0],
            y: p[1],
            distance: user.map(|u| {
                if i == 0 {
                    u.r
                } else {
                    u.interferer_distances[i - 1]
                }
            }),
            role: match (i, closest) {
                (0, _) => "serving",
                (i, Some(c)) if i == c + 1 => "closest_interferer",
                _ => "interferer",
            },
        })
        .collect())
}
