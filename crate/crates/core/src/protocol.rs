//! Per-round transmitter selection.
//!
//! After a NACK, one node is chosen to send the next parity batch:
//!
//! * [`Strategy::Opportunistic`] — relays that decoded the message and whose
//!   destination channel gain clears the threshold contend over `K`
//!   minislots, each sending a "Hello" independently with probability `p`;
//!   a minislot succeeds iff exactly one relay sends, collisions discard
//!   everything in that minislot, and the source picks uniformly among the
//!   distinct successful relays (falling back to itself when none).
//! * [`Strategy::Harbinger`] — the decoding relay closest to the
//!   destination, by true positions.
//! * [`Strategy::PointToPoint`] — always the source.
//!
//! Hello and ACK/NACK messages are error-free; collisions are the only
//! feedback impairment. Eligibility gains are the true upcoming-slot gains.

use std::collections::BTreeSet;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::topology::{NodeId, Topology};

#[derive(Debug, Error, PartialEq)]
pub enum ProtocolError {
    #[error("feedback probability must be in [0, 1], got {0}")]
    BadProbability(f64),
    #[error("minislot count must be >= 1")]
    NoMinislots,
    #[error("gain threshold must be > 0 (linear), got {0}")]
    BadThreshold(f64),
    #[error("per-relay probability list has {0} entries, expected {1}")]
    BadPerRelayLen(usize, usize),
}

/// Transmitter-selection strategy token.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Opportunistic,
    Harbinger,
    #[serde(rename = "p2p")]
    PointToPoint,
}

impl std::str::FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "opportunistic" => Ok(Self::Opportunistic),
            "harbinger" => Ok(Self::Harbinger),
            "p2p" => Ok(Self::PointToPoint),
            other => Err(format!(
                "unknown strategy {other:?} (expected opportunistic | harbinger | p2p)"
            )),
        }
    }
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Opportunistic => write!(f, "opportunistic"),
            Self::Harbinger => write!(f, "harbinger"),
            Self::PointToPoint => write!(f, "p2p"),
        }
    }
}

/// How the source picks among Hello senders after the contention window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WinnerRule {
    /// Uniform over the distinct relays with at least one clean minislot.
    #[default]
    DistinctRelays,
    /// Uniform over successful minislots (a relay winning twice counts twice).
    PerMinislot,
}

/// Contention parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContentionConfig {
    /// Feedback minislots per contention window.
    pub minislots: usize,
    /// Hello probability shared by all relays.
    pub feedback_prob: f64,
    /// Optional per-relay Hello probabilities overriding `feedback_prob`.
    pub per_relay_prob: Option<Vec<f64>>,
    /// Eligibility threshold on |h|^2 to the destination, linear.
    pub gain_threshold: f64,
    /// Winner pool weighting.
    pub winner_rule: WinnerRule,
}

impl ContentionConfig {
    pub fn validate(&self, n_relays: usize) -> Result<(), ProtocolError> {
        if self.minislots == 0 {
            return Err(ProtocolError::NoMinislots);
        }
        if !(0.0..=1.0).contains(&self.feedback_prob) {
            return Err(ProtocolError::BadProbability(self.feedback_prob));
        }
        if self.gain_threshold.is_nan() || self.gain_threshold <= 0.0 {
            return Err(ProtocolError::BadThreshold(self.gain_threshold));
        }
        if let Some(per) = &self.per_relay_prob {
            if per.len() != n_relays {
                return Err(ProtocolError::BadPerRelayLen(per.len(), n_relays));
            }
            for &p in per {
                if !(0.0..=1.0).contains(&p) {
                    return Err(ProtocolError::BadProbability(p));
                }
            }
        }
        Ok(())
    }

    fn prob_of(&self, relay: usize) -> f64 {
        match &self.per_relay_prob {
            Some(per) => per[relay],
            None => self.feedback_prob,
        }
    }
}

/// Inputs to one selection round.
#[derive(Debug, Clone)]
pub struct RoundState {
    /// Relays that have recovered the message so far this packet.
    pub decoded: BTreeSet<usize>,
    /// True |h|^2 to the destination for the upcoming slot, per relay.
    pub gains_to_dest: Vec<f64>,
    /// 0-based rate index of the upcoming round (>= 1; round 0 is always
    /// the source).
    pub rate_index: usize,
}

/// Decoded relays whose upcoming destination gain clears the threshold,
/// ascending by id.
pub fn eligible_set(state: &RoundState, cfg: &ContentionConfig) -> Vec<usize> {
    state
        .decoded
        .iter()
        .copied()
        .filter(|&i| state.gains_to_dest[i] > cfg.gain_threshold)
        .collect()
}

/// The contention transcript the engine keeps per round.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ContentionResult {
    pub winner: Option<usize>,
    /// Minislots in which exactly one relay sent a Hello.
    pub successful_minislots: usize,
}

/// Run `K` minislots of Hello feedback over the eligible set.
///
/// Draw order is fixed: minislots outermost, eligible relays in ascending
/// id order within each minislot, one Bernoulli draw per (minislot, relay).
pub fn run_contention<R: Rng>(
    eligible: &[usize],
    cfg: &ContentionConfig,
    rng: &mut R,
) -> ContentionResult {
    let mut success_count_per_relay: Vec<u32> = vec![0; eligible.len()];
    let mut successful_minislots = 0usize;
    for _slot in 0..cfg.minislots {
        let mut sender: Option<usize> = None;
        let mut collided = false;
        for (idx, &relay) in eligible.iter().enumerate() {
            let p = cfg.prob_of(relay);
            let sends = match p {
                p if p <= 0.0 => false,
                p if p >= 1.0 => true,
                p => rng.gen_bool(p),
            };
            if sends {
                if sender.is_some() {
                    collided = true;
                } else {
                    sender = Some(idx);
                }
            }
        }
        if let (Some(idx), false) = (sender, collided) {
            success_count_per_relay[idx] += 1;
            successful_minislots += 1;
        }
    }
    if successful_minislots == 0 {
        return ContentionResult {
            winner: None,
            successful_minislots,
        };
    }
    let winner = match cfg.winner_rule {
        WinnerRule::DistinctRelays => {
            let pool: Vec<usize> = eligible
                .iter()
                .zip(&success_count_per_relay)
                .filter(|(_, &c)| c > 0)
                .map(|(&r, _)| r)
                .collect();
            pool[rng.gen_range(0..pool.len())]
        }
        WinnerRule::PerMinislot => {
            let mut pick = rng.gen_range(0..successful_minislots as u32);
            let mut chosen = eligible[0];
            for (idx, &c) in success_count_per_relay.iter().enumerate() {
                if pick < c {
                    chosen = eligible[idx];
                    break;
                }
                pick -= c;
            }
            chosen
        }
    };
    ContentionResult {
        winner: Some(winner),
        successful_minislots,
    }
}

/// Outcome of transmitter selection for one round.
#[derive(Debug, Clone)]
pub struct SelectionOutcome {
    pub transmitter: NodeId,
    /// Present when a contention window actually ran.
    pub contention: Option<ContentionResult>,
    pub eligible_count: usize,
}

/// Pick the round transmitter under `strategy`. Round 0 is always the
/// source; this runs for rounds with `rate_index >= 1`.
pub fn select_transmitter<R: Rng>(
    strategy: Strategy,
    state: &RoundState,
    cfg: &ContentionConfig,
    topology: &Topology,
    rng: &mut R,
) -> SelectionOutcome {
    debug_assert!(state.rate_index >= 1, "round 0 is the source by definition");
    match strategy {
        Strategy::PointToPoint => SelectionOutcome {
            transmitter: NodeId::Source,
            contention: None,
            eligible_count: 0,
        },
        Strategy::Harbinger => {
            // Closest decoding relay to the destination; ties to lowest id.
            let best = state
                .decoded
                .iter()
                .map(|&i| (topology.distance(NodeId::Relay(i), NodeId::Destination), i))
                .min_by(|a, b| a.partial_cmp(b).unwrap());
            SelectionOutcome {
                transmitter: best.map_or(NodeId::Source, |(_, i)| NodeId::Relay(i)),
                contention: None,
                eligible_count: state.decoded.len(),
            }
        }
        Strategy::Opportunistic => {
            let eligible = eligible_set(state, cfg);
            let result = run_contention(&eligible, cfg, rng);
            SelectionOutcome {
                transmitter: result.winner.map_or(NodeId::Source, NodeId::Relay),
                contention: Some(result),
                eligible_count: eligible.len(),
            }
        }
    }
}

/// Closed-form per-minislot success probability `n p (1-p)^(n-1)`.
pub fn minislot_success_prob(n_eligible: usize, p: f64) -> f64 {
    n_eligible as f64 * p * (1.0 - p).powi(n_eligible as i32 - 1)
}

/// Closed-form probability that a whole window of `k` minislots produces no
/// winner: `(1 - n p (1-p)^(n-1))^k`.
pub fn no_winner_prob(n_eligible: usize, p: f64, k: usize) -> f64 {
    (1.0 - minislot_success_prob(n_eligible, p)).powi(k as i32)
}
