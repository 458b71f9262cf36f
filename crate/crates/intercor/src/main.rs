use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use intercor::config::{DistanceGrid, EntryConvention, ExperimentKind, ExperimentSpec};
use intercor::{layout_sites, run_experiment, validate_config, Outcome, RunError};
use intercor_core::simulator::Receiver;

const EXIT_CONFIG: u8 = 2;
const EXIT_THEOREM: u8 = 3;

#[derive(Parser)]
#[command(
    name = "intercor",
    version,
    about = "Coverage and rate under independent vs. correlated interferers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and write CSV plus a JSON sidecar.
    Run(RunArgs),
    /// Check a JSON config without running it.
    Validate { config: PathBuf },
    /// Print the 19-site layout (and user distances) as CSV.
    Layout {
        /// Normalized user distance in (0, 1].
        #[arg(long)]
        distance: Option<f64>,
        #[arg(long, default_value_t = 0.0)]
        azimuth_deg: f64,
    },
}

#[derive(Args)]
struct RunArgs {
    kind: ExperimentKind,
    /// JSON config; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// User Nakagami shape.
    #[arg(long)]
    m: Option<f64>,
    /// Interferer Nakagami shape.
    #[arg(long)]
    mc: Option<f64>,
    /// Interferer η-µ µ (selects η-µ interferers).
    #[arg(long)]
    mu: Option<f64>,
    /// Interferer η-µ η (selects η-µ interferers).
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    /// SIR threshold in dB.
    #[arg(long)]
    tdb: Option<f64>,
    /// Fading correlation base.
    #[arg(long, visible_alias = "rho")]
    rho_s: Option<f64>,
    /// Shadowing correlation base.
    #[arg(long)]
    rho_l: Option<f64>,
    #[arg(long)]
    sigma_db: Option<f64>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// `a:b:n` for n evenly spaced normalized distances from a to b.
    #[arg(long)]
    distances: Option<String>,
    /// siso, simo or mumimo.
    #[arg(long, value_parser = parse_receiver)]
    receiver: Option<Receiver>,
    #[arg(long)]
    azimuth_deg: Option<f64>,
    /// How ρ enters the correlation matrix.
    #[arg(long, value_enum)]
    entries: Option<EntryConvention>,
    /// CSV path; the JSON sidecar sits next to it.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_receiver(s: &str) -> Result<Receiver, String> {
    match s {
        "siso" => Ok(Receiver::Siso),
        "simo" | "simo_lmmse" => Ok(Receiver::SimoLmmse),
        "mumimo" | "mu_mimo" => Ok(Receiver::MuMimo),
        _ => Err(format!("unknown receiver {s:?} (siso, simo, mumimo)")),
    }
}

impl RunArgs {
    fn flags(&self) -> ExperimentSpec {
        ExperimentSpec {
            kind: Some(self.kind),
            m: self.m,
            m_c: self.mc,
            mu_c: self.mu,
            eta_i: self.eta,
            alpha: self.alpha,
            t_db: self.tdb,
            rho_s: self.rho_s,
            rho_l: self.rho_l,
            sigma_db: self.sigma_db,
            trials: self.trials,
            seed: self.seed,
            distances: self.distances.clone().map(DistanceGrid::Range),
            receiver: self.receiver,
            azimuth_deg: self.azimuth_deg,
            entries: self.entries,
            out: self.out.clone(),
        }
    }
}

fn run(args: &RunArgs) -> Result<ExitCode, RunError> {
    let file = match &args.config {
        Some(path) => ExperimentSpec::load(path)?,
        None => ExperimentSpec::default(),
    };
    let spec = file.overridden_by(args.flags());
    match run_experiment(&spec)? {
        Outcome::Sweep { config, rows } => {
            println!(
                "{}: {} rows -> {} (+ {})",
                config.kind.name(),
                rows.len(),
                config.out.display(),
                config.json_path().display()
            );
            Ok(ExitCode::SUCCESS)
        }
        Outcome::TheoremCheck { config, report } => {
            for c in &report.checks {
                println!(
                    "{} {}: {}",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.name,
                    c.detail
                );
            }
            println!("report -> {}", config.json_path().display());
            Ok(if report.all_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_THEOREM)
            })
        }
    }
}

fn validate(path: &Path) -> Result<ExitCode, RunError> {
    let spec = ExperimentSpec::load(path)?;
    let problems = validate_config(&spec);
    if problems.is_empty() {
        println!("ok");
        return Ok(ExitCode::SUCCESS);
    }
    for p in &problems {
        println!("{p}");
    }
    Ok(ExitCode::from(EXIT_CONFIG))
}

fn layout(distance: Option<f64>, azimuth_deg: f64) -> Result<ExitCode, RunError> {
    let sites = layout_sites(distance, azimuth_deg)?;
    let mut w = csv::Writer::from_writer(std::io::stdout());
    w.write_record(["index", "x", "y", "distance", "role"])?;
    for s in &sites {
        w.write_record([
            s.index.to_string(),
            s.x.to_string(),
            s.y.to_string(),
            s.distance.map_or_else(String::new, |d| d.to_string()),
            s.role.to_string(),
        ])?;
    }
    w.flush().map_err(|e| RunError::io("<stdout>", e))?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run(args) => run(args),
        Command::Validate { config } => validate(config),
        Command::Layout {
            distance,
            azimuth_deg,
        } => layout(*distance, *azimuth_deg),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_config() {
                ExitCode::from(EXIT_CONFIG)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
