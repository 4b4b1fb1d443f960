//! `relaysim` — campaigns and parameter sweeps for the two-hop relay HARQ
//! simulator, with CSV output and optional JSON-lines packet transcripts.
//!
//! Configuration is a TOML file (every field optional; defaults are the
//! reference setup) overridden by flags. Presets reproduce the standard
//! experiments:
//!
//! * `fig3` — throughput vs feedback probability (p in 0.05..0.95);
//! * `fig4` — throughput vs eligibility threshold (eta in -103..-79 dB);
//! * `fig5` — throughput vs destination SNR for all three strategies.
//!
//! Exit codes: 0 success, 2 configuration error, 3 runtime fault.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use relaysim_core::{ConfigError, SimConfig, Strategy, SweepAxis};

mod output;
mod presets;
mod run;

#[derive(Debug, Parser)]
#[command(
    name = "relaysim",
    version,
    about = "Two-hop relay HARQ network simulator"
)]
pub struct Cli {
    /// TOML configuration file; missing fields take the built-in defaults.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Experiment preset: fig3 | fig4 | fig5.
    #[arg(long, value_name = "NAME", conflicts_with = "sweep")]
    preset: Option<String>,

    /// Transmitter-selection strategy: opportunistic | harbinger | p2p.
    #[arg(long, value_name = "TOKEN")]
    strategy: Option<Strategy>,

    /// Master seed.
    #[arg(long, value_name = "U64")]
    seed: Option<u64>,

    /// Packets per campaign.
    #[arg(long, value_name = "N")]
    packets: Option<u64>,

    /// Sweep specification AXIS=V1,V2,... over feedback_prob |
    /// gain_threshold_db | avg_snr_db | minislots | n_relays.
    #[arg(long, value_name = "AXIS=V1,V2,...")]
    sweep: Option<String>,

    /// Output CSV path (stdout when omitted).
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Write per-packet JSON-lines transcripts here.
    #[arg(long, value_name = "PATH")]
    transcripts: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("relaysim: {err}");
            match err {
                ConfigError::Fault(_) | ConfigError::Io(_) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

/// Resolve the final configuration: file, then flag overrides.
pub fn resolve_config(cli: &Cli) -> Result<SimConfig, ConfigError> {
    let mut cfg = match &cli.config {
        None => SimConfig::default(),
        Some(path) => {
            // An unreadable config file is a configuration error (exit 2),
            // unlike I/O faults on the output side.
            let text = std::fs::read_to_string(path)
                .map_err(|e| ConfigError::Parse(format!("{}: {e}", path.display())))?;
            toml::from_str(&text).map_err(|e| ConfigError::Parse(e.to_string()))?
        }
    };
    if let Some(strategy) = cli.strategy {
        cfg.strategy = strategy;
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(packets) = cli.packets {
        cfg.n_packets = packets;
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Parse `AXIS=V1,V2,...`.
pub fn parse_sweep_spec(spec: &str) -> Result<(SweepAxis, Vec<f64>), ConfigError> {
    let (axis_str, values_str) = spec
        .split_once('=')
        .ok_or_else(|| ConfigError::Parse(format!("sweep spec {spec:?} is not AXIS=V1,V2,...")))?;
    let axis: SweepAxis = axis_str.trim().parse().map_err(ConfigError::Parse)?;
    let values: Result<Vec<f64>, _> = values_str
        .split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .map_err(|e| ConfigError::Parse(format!("sweep value {v:?}: {e}")))
        })
        .collect();
    let values = values?;
    if values.is_empty() {
        return Err(ConfigError::Parse("sweep needs at least one value".into()));
    }
    Ok((axis, values))
}
