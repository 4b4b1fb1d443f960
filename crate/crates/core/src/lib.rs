//! Monte Carlo simulator of a two-hop wireless relay network running
//! incremental-redundancy hybrid ARQ over Rayleigh block-fading links.
//!
//! A source broadcasts a concatenated-coded packet (RCPC inner code over a
//! (255, 239) Reed-Solomon outer code); on a destination NACK, one node is
//! picked to transmit the next batch of parity bits. The transmitter is
//! chosen by one of three strategies:
//!
//! * `opportunistic` — decoding relays whose destination channel gain clears
//!   a threshold contend over random-access minislots ("Hello" feedback);
//! * `harbinger` — the decoding relay geographically closest to the
//!   destination (a centralized, position-based baseline);
//! * `p2p` — the source always retransmits (no relaying).
//!
//! The crate is organized bottom-up: [`topology`] (placement, path loss),
//! [`phy`] (fading, BPSK, soft demodulation), [`fec`] (RCPC + Reed-Solomon
//! codecs), [`harq`] (soft combining), [`protocol`] (transmitter selection),
//! and [`engine`] (packet episodes, campaigns, sweeps, metrics). All
//! randomness flows through explicitly seeded ChaCha streams ([`rng`]), so
//! every campaign is bit-reproducible from its seed:
//!
//! ```
//! use relaysim_core::{run_campaign, SimConfig};
//!
//! let cfg = SimConfig {
//!     n_relays: 3,
//!     n_packets: 2,
//!     seed: 7,
//!     ..SimConfig::default()
//! };
//! let result = run_campaign(&cfg).unwrap();
//! assert_eq!(result.metrics.packets, 2);
//! assert!(result.metrics.r_avg > 0.0);
//! assert_eq!(run_campaign(&cfg).unwrap().metrics, result.metrics);
//! ```

pub mod config;
pub mod engine;
pub mod fec;
pub mod harq;
pub mod phy;
pub mod protocol;
pub mod rng;
pub mod topology;
pub mod units;

pub use config::{ConfigError, SimConfig, TopologyMode};
pub use engine::{
    measure_lav, run_campaign, sweep, CampaignResult, Metrics, PacketOutcome, PacketTranscript,
    SweepAxis,
};
pub use fec::{CodeChain, ConvCode, DecodeFailure, RcpcFamily, RsCode};
pub use harq::{DecodeOutcome, SoftBuffer};
pub use phy::{LinkGain, NoiseParams, SoftObservation};
pub use protocol::{ContentionConfig, RoundState, Strategy, WinnerRule};
pub use topology::{NodeId, PathLossParams, Point, Topology};
