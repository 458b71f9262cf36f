//! CSV and JSON writers. Every file embeds the resolved config.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::config::{EntryConvention, ResolvedConfig};
use crate::error::RunError;
use crate::experiment::{Row, TheoremReport};

pub const CSV_COLUMNS: [&str; 8] = [
    "distance",
    "variant",
    "coverage",
    "coverage_se",
    "rate_nats",
    "rate_se",
    "analytic_coverage",
    "seed",
];

/// Modelling conventions that are not visible in the numeric config.
#[derive(Debug, Clone, Serialize)]
pub struct Conventions {
    pub correlation_entries: &'static str,
    pub alternative_entries: &'static str,
    pub user_azimuth: String,
    pub user_shadowing: &'static str,
    pub shadowing_approximation: &'static str,
    pub simo: &'static str,
    pub mu_mimo: &'static str,
    pub closest_interferer: &'static str,
    pub correlated_sampling: &'static str,
    pub threshold_units: &'static str,
}

impl Conventions {
    pub fn for_config(cfg: &ResolvedConfig) -> Self {
        let (entries, alternative) = match cfg.entries {
            EntryConvention::Sqrt => (
                "C_pq = sqrt(rho^|p-q|)",
                "direct: C_pq = rho^|p-q| (--entries direct)",
            ),
            EntryConvention::Direct => (
                "C_pq = rho^|p-q|",
                "sqrt: C_pq = sqrt(rho^|p-q|) (--entries sqrt)",
            ),
        };
        Conventions {
            correlation_entries: entries,
            alternative_entries: alternative,
            user_azimuth: format!(
                "{} degrees from the direction of a serving-cell corner",
                cfg.azimuth_deg
            ),
            user_shadowing: "serving link has Nakagami-m fading only",
            shadowing_approximation: "interferer fading x log-normal replaced by a unit-mean \
                gamma law of moment-matched shape; per-lag correlation is that of the composite powers",
            simo: "all components of the closest interfering site removed",
            mu_mimo: "two i.i.d. streams per site sharing the site correlation (C kron I2); \
                one stream of the closest site removed",
            closest_interferer: "smallest distance, ties to the lowest site index",
            correlated_sampling: "sum of eigen-weights of D^1/2 C D^1/2 times i.i.d. gamma variates",
            threshold_units: "t_db converted to linear at the command line",
        }
    }
}

#[derive(Serialize)]
struct SweepFile<'a> {
    config: &'a ResolvedConfig,
    conventions: Conventions,
    rows: &'a [Row],
}

#[derive(Serialize)]
struct TheoremFile<'a> {
    config: &'a ResolvedConfig,
    conventions: Conventions,
    pass: bool,
    report: &'a TheoremReport,
}

fn create(path: &Path) -> Result<BufWriter<File>, RunError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| RunError::io(dir, e))?;
    }
    let file = File::create(path).map_err(|e| RunError::io(path, e))?;
    Ok(BufWriter::new(file))
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(String::new, |x| x.to_string())
}

/// Writes `# config: {json}` and then one CSV record per row.
pub fn write_csv(path: &Path, cfg: &ResolvedConfig, rows: &[Row]) -> Result<(), RunError> {
    let mut out = create(path)?;
    writeln!(out, "# config: {}", serde_json::to_string(cfg)?)
        .map_err(|e| RunError::io(path, e))?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_COLUMNS)?;
    for r in rows {
        w.write_record([
            r.distance.to_string(),
            r.variant.clone(),
            r.coverage.to_string(),
            r.coverage_se.to_string(),
            r.rate_nats.to_string(),
            r.rate_se.to_string(),
            fmt_opt(r.analytic_coverage),
            r.seed.to_string(),
        ])?;
    }
    w.flush().map_err(|e| RunError::io(path, e))?;
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), RunError> {
    let mut out = create(path)?;
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out).map_err(|e| RunError::io(path, e))?;
    out.flush().map_err(|e| RunError::io(path, e))
}

pub fn write_sweep_json(path: &Path, cfg: &ResolvedConfig, rows: &[Row]) -> Result<(), RunError> {
    write_json(
        path,
        &SweepFile {
            config: cfg,
            conventions: Conventions::for_config(cfg),
            rows,
        },
    )
}

pub fn write_theorem_json(
    path: &Path,
    cfg: &ResolvedConfig,
    report: &TheoremReport,
) -> Result<(), RunError> {
    write_json(
        path,
        &TheoremFile {
            config: cfg,
            conventions: Conventions::for_config(cfg),
            pass: report.all_pass(),
            report,
        },
    )
}

/// Reads rows back from a file written by [`write_csv`], with its config.
pub fn read_csv(path: &Path) -> Result<(ResolvedConfig, Vec<Row>), RunError> {
    let text = fs::read_to_string(path).map_err(|e| RunError::io(path, e))?;
    let (first, body) = text
        .split_once('\n')
        .ok_or_else(|| RunError::Config(format!("{}: empty file", path.display())))?;
    let json = first
        .strip_prefix("# config: ")
        .ok_or_else(|| RunError::Config(format!("{}: missing config line", path.display())))?;
    let cfg: ResolvedConfig = serde_json::from_str(json)?;
    let mut reader = csv::Reader::from_reader(body.as_bytes());
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record?;
        let num = |i: usize| -> Result<f64, RunError> {
            record[i]
                .parse()
                .map_err(|_| RunError::Config(format!("bad number {:?}", &record[i])))
        };
        rows.push(Row {
            distance: num(0)?,
            variant: record[1].to_string(),
            coverage: num(2)?,
            coverage_se: num(3)?,
            rate_nats: num(4)?,
            rate_se: num(5)?,
            analytic_coverage: if record[6].is_empty() {
                None
            } else {
                Some(num(6)?)
            },
            seed: record[7]
                .parse()
                .map_err(|_| RunError::Config(format!("bad seed {:?}", &record[7])))?,
        });
    }
    Ok((cfg, rows))
}
