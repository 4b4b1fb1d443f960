//! Campaign configuration: defaults, validation, and the resolved-config
//! hash embedded in every output row.
//!
//! Defaults reproduce the reference setup: 2.4 GHz carrier, 1 m reference
//! distance, exponent 3, 100 m source-destination distance, 20 relays,
//! N0 = -134 dB, destination SNR 2 dB, 10 minislots, Hello probability 0.3,
//! eligibility threshold -91 dB.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::protocol::{Strategy, WinnerRule};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config field {field}: {message}")]
    Invalid {
        field: &'static str,
        message: String,
    },
    #[error("could not read config: {0}")]
    Io(String),
    #[error("could not parse config: {0}")]
    Parse(String),
    #[error("simulation fault: {0}")]
    Fault(String),
}

impl ConfigError {
    pub fn invalid(field: &'static str, message: impl Into<String>) -> Self {
        Self::Invalid {
            field,
            message: message.into(),
        }
    }
}

/// Whether relays are redrawn per campaign or per packet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TopologyMode {
    /// One deployment per campaign, shared by all packets.
    #[default]
    PerCampaign,
    /// Fresh relay positions for every packet.
    PerPacket,
}

/// Full resolved simulation configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimConfig {
    /// Carrier frequency f_c, Hz.
    pub carrier_freq_hz: f64,
    /// Path-loss reference distance d_0, m.
    pub reference_distance_m: f64,
    /// Path-loss exponent mu.
    pub path_loss_exponent: f64,
    /// Source-destination distance (also the relay range bound), m.
    pub source_dest_distance_m: f64,
    /// Number of relays.
    pub n_relays: usize,
    /// Noise power N0, dB (linear power in dB).
    pub noise_power_db: f64,
    /// Average received SNR at the destination, dB; fixes the per-symbol
    /// transmit energy through the path-loss model.
    pub dest_snr_db: f64,
    /// Contention minislots per feedback window.
    pub minislots: usize,
    /// Hello probability, shared by all relays.
    pub feedback_prob: f64,
    /// Optional per-relay Hello probabilities.
    pub per_relay_prob: Option<Vec<f64>>,
    /// Eligibility threshold on |h|^2 to the destination, dB.
    pub gain_threshold_db: f64,
    /// Winner pool weighting after contention.
    pub winner_rule: WinnerRule,
    /// Transmitter-selection strategy.
    pub strategy: Strategy,
    /// Packets per campaign.
    pub n_packets: u64,
    /// Master seed.
    pub seed: u64,
    /// Topology redraw policy.
    pub topology_mode: TopologyMode,
    /// Whether relays soft-combine everything they overhear (else they only
    /// keep the rounds transmitted by the source).
    pub relay_combining: bool,
    /// Common random numbers across sweep values (same seed per value);
    /// otherwise each sweep point derives its own seed.
    pub common_random_numbers: bool,
    /// Optional plain-text puncturing-mask file overriding the built-in
    /// family.
    pub mask_file: Option<String>,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            carrier_freq_hz: 2.4e9,
            reference_distance_m: 1.0,
            path_loss_exponent: 3.0,
            source_dest_distance_m: 100.0,
            n_relays: 20,
            noise_power_db: -134.0,
            dest_snr_db: 2.0,
            minislots: 10,
            feedback_prob: 0.3,
            per_relay_prob: None,
            gain_threshold_db: -91.0,
            winner_rule: WinnerRule::default(),
            strategy: Strategy::Opportunistic,
            n_packets: 2000,
            seed: 1,
            topology_mode: TopologyMode::default(),
            relay_combining: true,
            common_random_numbers: true,
            mask_file: None,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let positive = |field: &'static str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(ConfigError::invalid(field, format!("must be > 0, got {v}")))
            }
        };
        positive("carrier_freq_hz", self.carrier_freq_hz)?;
        positive("reference_distance_m", self.reference_distance_m)?;
        positive("source_dest_distance_m", self.source_dest_distance_m)?;
        if !self.path_loss_exponent.is_finite() || self.path_loss_exponent < 2.0 {
            return Err(ConfigError::invalid(
                "path_loss_exponent",
                format!("must be >= 2, got {}", self.path_loss_exponent),
            ));
        }
        if self.n_relays == 0 {
            return Err(ConfigError::invalid("n_relays", "must be >= 1"));
        }
        if !self.noise_power_db.is_finite() {
            return Err(ConfigError::invalid("noise_power_db", "must be finite"));
        }
        if !self.dest_snr_db.is_finite() {
            return Err(ConfigError::invalid("dest_snr_db", "must be finite"));
        }
        if self.minislots == 0 {
            return Err(ConfigError::invalid("minislots", "must be >= 1"));
        }
        if !(0.0..=1.0).contains(&self.feedback_prob) {
            return Err(ConfigError::invalid(
                "feedback_prob",
                format!("must be in [0, 1], got {}", self.feedback_prob),
            ));
        }
        if let Some(per) = &self.per_relay_prob {
            if per.len() != self.n_relays {
                return Err(ConfigError::invalid(
                    "per_relay_prob",
                    format!("has {} entries, expected {}", per.len(), self.n_relays),
                ));
            }
            if per.iter().any(|p| !(0.0..=1.0).contains(p)) {
                return Err(ConfigError::invalid(
                    "per_relay_prob",
                    "entries must be in [0, 1]",
                ));
            }
        }
        if !self.gain_threshold_db.is_finite() {
            return Err(ConfigError::invalid("gain_threshold_db", "must be finite"));
        }
        if self.n_packets == 0 {
            return Err(ConfigError::invalid("n_packets", "must be >= 1"));
        }
        Ok(())
    }

    /// First 16 hex digits of the SHA-256 of the canonical JSON form.
    /// Identifies the resolved configuration in every CSV row.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serializes");
        let digest = Sha256::digest(canonical.as_bytes());
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_reproduce_reference_setup() {
        let cfg = SimConfig::default();
        assert_eq!(cfg.carrier_freq_hz, 2.4e9);
        assert_eq!(cfg.reference_distance_m, 1.0);
        assert_eq!(cfg.source_dest_distance_m, 100.0);
        assert_eq!(cfg.path_loss_exponent, 3.0);
        assert_eq!(cfg.n_relays, 20);
        assert_eq!(cfg.noise_power_db, -134.0);
        assert_eq!(cfg.minislots, 10);
        assert_eq!(cfg.gain_threshold_db, -91.0);
        assert_eq!(cfg.feedback_prob, 0.3);
        assert_eq!(cfg.dest_snr_db, 2.0);
        assert!(cfg.validate().is_ok());
    }

    #[test]
    fn rejects_out_of_range_probability() {
        let cfg = SimConfig {
            feedback_prob: 1.5,
            ..SimConfig::default()
        };
        let err = cfg.validate().unwrap_err();
        assert!(err.to_string().contains("feedback_prob"));
    }

    #[test]
    fn hash_pins_every_field() {
        let a = SimConfig::default();
        let mut b = a.clone();
        assert_eq!(a.hash(), b.hash());
        b.gain_threshold_db = -85.0;
        assert_ne!(a.hash(), b.hash());
        let c = SimConfig {
            seed: 2,
            ..SimConfig::default()
        };
        assert_ne!(a.hash(), c.hash());
    }

    #[test]
    fn unknown_keys_rejected_by_serde() {
        let err = serde_json::from_str::<SimConfig>("{\"not_a_field\": 1}").unwrap_err();
        assert!(err.to_string().contains("not_a_field"));
    }

    #[test]
    fn empty_config_parses_to_defaults() {
        let cfg: SimConfig = serde_json::from_str("{}").unwrap();
        assert_eq!(cfg, SimConfig::default());
    }
}
