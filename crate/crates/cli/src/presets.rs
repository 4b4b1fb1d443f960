//! Experiment presets: the three standard sweeps.

use relaysim_core::{ConfigError, SimConfig, Strategy, SweepAxis};

/// A preset pins the off-axis parameters and defines the sweep grid and the
/// strategy series to run.
pub struct Preset {
    pub name: &'static str,
    pub axis: SweepAxis,
    pub values: Vec<f64>,
    pub strategies: Vec<Strategy>,
}

impl Preset {
    pub fn by_name(name: &str) -> Result<Self, ConfigError> {
        match name {
            "fig3" => Ok(Self {
                name: "fig3",
                axis: SweepAxis::FeedbackProb,
                values: (1..=19).map(|i| i as f64 * 0.05).collect(),
                strategies: vec![Strategy::Opportunistic],
            }),
            "fig4" => Ok(Self {
                name: "fig4",
                axis: SweepAxis::GainThresholdDb,
                values: (0..=12).map(|i| -103.0 + 2.0 * i as f64).collect(),
                strategies: vec![Strategy::Opportunistic],
            }),
            "fig5" => Ok(Self {
                name: "fig5",
                axis: SweepAxis::AvgSnrDb,
                values: vec![-2.0, 0.0, 2.0, 4.0, 6.0],
                strategies: vec![
                    Strategy::Opportunistic,
                    Strategy::Harbinger,
                    Strategy::PointToPoint,
                ],
            }),
            other => Err(ConfigError::Parse(format!(
                "unknown preset {other:?} (expected fig3 | fig4 | fig5)"
            ))),
        }
    }

    /// Pin the preset's fixed parameters onto a base configuration.
    pub fn pin(&self, cfg: &SimConfig) -> SimConfig {
        let mut cfg = cfg.clone();
        match self.name {
            "fig3" => {
                cfg.minislots = 10;
                cfg.gain_threshold_db = -91.0;
                cfg.dest_snr_db = 2.0;
            }
            "fig4" => {
                cfg.minislots = 10;
                cfg.feedback_prob = 0.1;
                cfg.dest_snr_db = 2.0;
            }
            "fig5" => {
                cfg.minislots = 10;
                cfg.feedback_prob = 0.3;
                cfg.gain_threshold_db = -91.0;
            }
            _ => unreachable!("presets are constructed by name"),
        }
        cfg
    }
}
