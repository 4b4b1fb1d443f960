//! Packet episodes, campaigns, sweeps, and throughput metrics.
//!
//! A packet episode walks the retransmission schedule: the source opens with
//! the highest-rate positions; after each destination NACK a transmitter is
//! selected for the next incremental batch until the destination decodes or
//! the mother code is exhausted. All nodes draw fresh fading every slot;
//! every listening node soft-combines what it overhears.
//!
//! Campaigns aggregate packets into [`Metrics`]; packet batches run in
//! parallel over pre-split random substreams and are reduced in packet-index
//! order, so results are bit-identical regardless of thread count.

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{ConfigError, SimConfig, TopologyMode};
use crate::fec::{CodeChain, RcpcFamily, RS_K};
use crate::harq::{attempt_decode, SoftBuffer};
use crate::phy::{calibrate_tx_energy, demodulate, sample_fading, transmit, NoiseParams};
use crate::protocol::{
    select_transmitter, ContentionConfig, RoundState, SelectionOutcome, Strategy,
};
use crate::rng::{packet_stream, stream_rng, sweep_point_seed, PacketStream, TOPOLOGY_STREAM};
use crate::topology::{NodeId, PathLossParams, Topology};
use crate::units::db_to_linear;

/// Fading source for one (transmitter, receiver, slot) link. The default
/// implementation draws Rayleigh coefficients; tests inject scripted tables.
pub trait FadingModel: Sync {
    fn coefficient(
        &self,
        rng: &mut ChaCha8Rng,
        transmitter: NodeId,
        receiver: NodeId,
        slot: usize,
        mean_gain: f64,
    ) -> Complex64;
}

/// Rayleigh block fading, `E[|h|^2]` equal to the deterministic path gain.
#[derive(Debug, Clone, Copy, Default)]
pub struct RayleighFading;

impl FadingModel for RayleighFading {
    fn coefficient(
        &self,
        rng: &mut ChaCha8Rng,
        _transmitter: NodeId,
        _receiver: NodeId,
        _slot: usize,
        mean_gain: f64,
    ) -> Complex64 {
        sample_fading(rng, mean_gain)
    }
}

/// Result of one packet episode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PacketOutcome {
    /// Destination outer decode succeeded before the schedule ran out.
    pub success: bool,
    /// Rounds actually transmitted.
    pub rounds_used: usize,
    /// Total coded bits released over the air.
    pub coded_bits_sent: u64,
    /// Transmitter of each round, in order.
    pub transmitter_per_round: Vec<NodeId>,
    /// Destination "success" whose payload differs from the true message.
    pub undetected_error: bool,
}

/// Per-round transcript record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub round: usize,
    pub rate_index: usize,
    pub transmitter: NodeId,
    pub coded_bits: usize,
    /// Decoded relays eligible for contention (opportunistic only).
    pub eligible_count: usize,
    /// Minislots run in the feedback window preceding this round.
    pub minislots_run: Option<usize>,
    /// Minislots in which exactly one Hello arrived.
    pub successful_minislots: Option<usize>,
    pub dest_success: bool,
}

/// Per-packet transcript (JSON-lines friendly).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PacketTranscript {
    pub packet_index: u64,
    pub success: bool,
    pub undetected_error: bool,
    pub rounds: Vec<RoundRecord>,
}

/// Campaign-level aggregates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub packets: u64,
    /// Mean additional transmitted bits per period of information bits.
    pub l_av: f64,
    /// Throughput figure `k/(n+M) * P/(P+l_av)`.
    pub r_avg: f64,
    /// Correctly delivered inner information bits over total coded bits.
    pub empirical_throughput: f64,
    /// Fraction of packets that exhausted the schedule without success.
    pub outage_rate: f64,
    /// 95% halfwidth of `r_avg` (normal approximation, delta method
    /// through `l_av`).
    pub ci_halfwidth: f64,
    /// Successes whose delivered payload was wrong (genie count).
    pub undetected_errors: u64,
    /// Rounds transmitted by the source.
    pub source_tx_rounds: u64,
    /// Rounds transmitted by each relay.
    pub relay_tx_rounds: Vec<u64>,
}

/// Everything a campaign produces.
#[derive(Debug, Clone)]
pub struct CampaignResult {
    pub metrics: Metrics,
    /// Deployment used (the last one drawn, in per-packet mode).
    pub topology: Topology,
    pub outcomes: Vec<PacketOutcome>,
    pub transcripts: Vec<PacketTranscript>,
}

/// Sweepable parameter axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    FeedbackProb,
    GainThresholdDb,
    AvgSnrDb,
    Minislots,
    NRelays,
}

impl std::str::FromStr for SweepAxis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "feedback_prob" => Ok(Self::FeedbackProb),
            "gain_threshold_db" => Ok(Self::GainThresholdDb),
            "avg_snr_db" => Ok(Self::AvgSnrDb),
            "minislots" => Ok(Self::Minislots),
            "n_relays" => Ok(Self::NRelays),
            other => Err(format!(
                "unknown sweep axis {other:?} (expected feedback_prob | gain_threshold_db | \
                 avg_snr_db | minislots | n_relays)"
            )),
        }
    }
}

impl std::fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Self::FeedbackProb => "feedback_prob",
            Self::GainThresholdDb => "gain_threshold_db",
            Self::AvgSnrDb => "avg_snr_db",
            Self::Minislots => "minislots",
            Self::NRelays => "n_relays",
        };
        write!(f, "{s}")
    }
}

/// One sweep point: the resolved per-point config and its campaign result.
#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub axis_value: f64,
    pub config: SimConfig,
    pub result: CampaignResult,
}

/// Additional transmitted bits per period of information bits, averaged
/// over packets (failed packets count their full expenditure):
/// `l_i = coded_bits_i * P / k - P`.
pub fn measure_lav(
    outcomes: &[PacketOutcome],
    k: usize,
    period: usize,
) -> Result<f64, ConfigError> {
    if outcomes.is_empty() {
        return Err(ConfigError::Fault("measure_lav over zero packets".into()));
    }
    let sum: f64 = outcomes
        .iter()
        .map(|o| o.coded_bits_sent as f64 * period as f64 / k as f64 - period as f64)
        .sum();
    Ok(sum / outcomes.len() as f64)
}

/// Throughput figure `k/(n+M) * P/(P+l_av)`.
pub fn throughput(l_av: f64, k: usize, n: usize, period: usize, memory: usize) -> f64 {
    (k as f64 / (n + memory) as f64) * (period as f64 / (period as f64 + l_av))
}

/// The codeword length `n` used in the throughput figure: the mother-code
/// expansion of the information block, `k / R_m`.
pub fn eq_n(codes: &CodeChain) -> usize {
    let (num, den) = codes.family.rate(codes.num_rates() - 1);
    codes.k * den / num
}

fn contention_config(cfg: &SimConfig) -> ContentionConfig {
    ContentionConfig {
        minislots: cfg.minislots,
        feedback_prob: cfg.feedback_prob,
        per_relay_prob: cfg.per_relay_prob.clone(),
        gain_threshold: db_to_linear(cfg.gain_threshold_db),
        winner_rule: cfg.winner_rule,
    }
}

/// Mean path gains between every link the protocol can use.
struct GainTable {
    source_to_dest: f64,
    source_to_relay: Vec<f64>,
    relay_to_dest: Vec<f64>,
    relay_to_relay: Vec<Vec<f64>>,
}

impl GainTable {
    fn build(topo: &Topology, params: &PathLossParams) -> Result<Self, ConfigError> {
        let gain = |a: NodeId, b: NodeId| {
            crate::topology::path_gain(topo.distance(a, b), params)
                .map_err(|e| ConfigError::Fault(format!("degenerate link {a}->{b}: {e}")))
        };
        let k = topo.n_relays();
        let mut source_to_relay = Vec::with_capacity(k);
        let mut relay_to_dest = Vec::with_capacity(k);
        let mut relay_to_relay = vec![vec![0.0; k]; k];
        for i in 0..k {
            source_to_relay.push(gain(NodeId::Source, NodeId::Relay(i))?);
            relay_to_dest.push(gain(NodeId::Relay(i), NodeId::Destination)?);
            for j in 0..k {
                if i != j {
                    relay_to_relay[i][j] = gain(NodeId::Relay(i), NodeId::Relay(j))?;
                }
            }
        }
        Ok(Self {
            source_to_dest: gain(NodeId::Source, NodeId::Destination)?,
            source_to_relay,
            relay_to_dest,
            relay_to_relay,
        })
    }
}

/// Fresh fading coefficients for one slot.
struct SlotFading {
    source_to_dest: Complex64,
    source_to_relay: Vec<Complex64>,
    relay_to_dest: Vec<Complex64>,
    relay_to_relay: Vec<Vec<Complex64>>,
}

impl SlotFading {
    /// Fixed draw order: source->dest, source->relay (ascending),
    /// relay->dest (ascending), relay->relay (row-major, skipping self).
    fn draw<F: FadingModel>(
        fading: &F,
        rng: &mut ChaCha8Rng,
        gains: &GainTable,
        slot: usize,
        relays_listen: bool,
    ) -> Self {
        let k = gains.source_to_relay.len();
        let source_to_dest = fading.coefficient(
            rng,
            NodeId::Source,
            NodeId::Destination,
            slot,
            gains.source_to_dest,
        );
        if !relays_listen {
            return Self {
                source_to_dest,
                source_to_relay: Vec::new(),
                relay_to_dest: Vec::new(),
                relay_to_relay: Vec::new(),
            };
        }
        let source_to_relay = (0..k)
            .map(|i| {
                fading.coefficient(
                    rng,
                    NodeId::Source,
                    NodeId::Relay(i),
                    slot,
                    gains.source_to_relay[i],
                )
            })
            .collect();
        let relay_to_dest = (0..k)
            .map(|i| {
                fading.coefficient(
                    rng,
                    NodeId::Relay(i),
                    NodeId::Destination,
                    slot,
                    gains.relay_to_dest[i],
                )
            })
            .collect();
        let relay_to_relay = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        if i == j {
                            Complex64::new(0.0, 0.0)
                        } else {
                            fading.coefficient(
                                rng,
                                NodeId::Relay(i),
                                NodeId::Relay(j),
                                slot,
                                gains.relay_to_relay[i][j],
                            )
                        }
                    })
                    .collect()
            })
            .collect();
        Self {
            source_to_dest,
            source_to_relay,
            relay_to_dest,
            relay_to_relay,
        }
    }

    fn to_dest(&self, tx: NodeId) -> Complex64 {
        match tx {
            NodeId::Source => self.source_to_dest,
            NodeId::Relay(i) => self.relay_to_dest[i],
            NodeId::Destination => unreachable!("destination never transmits"),
        }
    }

    fn to_relay(&self, tx: NodeId, r: usize) -> Complex64 {
        match tx {
            NodeId::Source => self.source_to_relay[r],
            NodeId::Relay(i) => self.relay_to_relay[i][r],
            NodeId::Destination => unreachable!("destination never transmits"),
        }
    }
}

enum RelayState {
    Listening(SoftBuffer),
    /// Recovered a payload and holds its re-encoded mother codeword
    /// (regenerative forwarding; a miscorrected payload propagates).
    Decoded {
        mother: Vec<u8>,
    },
}

/// A fully resolved simulation ready to run packets.
pub struct PacketSimulator {
    cfg: SimConfig,
    codes: CodeChain,
    params: PathLossParams,
    noise: NoiseParams,
    contention: ContentionConfig,
    /// Campaign-level deployment (per-packet mode redraws instead).
    topology: Option<Topology>,
    gains: Option<GainTable>,
}

impl PacketSimulator {
    pub fn new(cfg: &SimConfig) -> Result<Self, ConfigError> {
        cfg.validate()?;
        let family = match &cfg.mask_file {
            None => RcpcFamily::standard(),
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| ConfigError::invalid("mask_file", format!("{path}: {e}")))?;
                RcpcFamily::parse(&text).map_err(|e| ConfigError::Parse(e.to_string()))?
            }
        };
        let codes = CodeChain::new(crate::fec::ConvCode::standard(), family);
        let params = PathLossParams::from_carrier_frequency(
            cfg.carrier_freq_hz,
            cfg.reference_distance_m,
            cfg.path_loss_exponent,
            cfg.source_dest_distance_m,
        )
        .map_err(|e| ConfigError::invalid("carrier_freq_hz", e.to_string()))?;
        let n0 = db_to_linear(cfg.noise_power_db);
        let tx_energy =
            calibrate_tx_energy(cfg.dest_snr_db, cfg.source_dest_distance_m, &params, n0)
                .map_err(|e| ConfigError::invalid("dest_snr_db", e.to_string()))?;
        let contention = contention_config(cfg);
        contention
            .validate(cfg.n_relays)
            .map_err(|e| ConfigError::invalid("feedback_prob", e.to_string()))?;

        let (topology, gains) = match cfg.topology_mode {
            TopologyMode::PerCampaign => {
                let mut rng = stream_rng(cfg.seed, TOPOLOGY_STREAM);
                let topo = Topology::place_relays(&mut rng, cfg.n_relays, &params)
                    .map_err(|e| ConfigError::invalid("n_relays", e.to_string()))?;
                let gains = GainTable::build(&topo, &params)?;
                (Some(topo), Some(gains))
            }
            TopologyMode::PerPacket => (None, None),
        };

        Ok(Self {
            cfg: cfg.clone(),
            codes,
            params,
            noise: NoiseParams::new(n0, tx_energy),
            contention,
            topology,
            gains,
        })
    }

    pub fn codes(&self) -> &CodeChain {
        &self.codes
    }

    pub fn noise(&self) -> &NoiseParams {
        &self.noise
    }

    /// The campaign deployment, or the packet-specific one in per-packet
    /// mode.
    pub fn topology_for_packet(&self, packet_index: u64) -> Result<Topology, ConfigError> {
        match &self.topology {
            Some(t) => Ok(t.clone()),
            None => {
                let mut rng = stream_rng(
                    self.cfg.seed,
                    packet_stream(packet_index, PacketStream::Topology),
                );
                Topology::place_relays(&mut rng, self.cfg.n_relays, &self.params)
                    .map_err(|e| ConfigError::invalid("n_relays", e.to_string()))
            }
        }
    }

    /// Run one packet under Rayleigh fading.
    pub fn run_packet(
        &self,
        packet_index: u64,
    ) -> Result<(PacketOutcome, PacketTranscript), ConfigError> {
        self.run_packet_with(packet_index, &RayleighFading)
    }

    /// Run one packet with an injected fading model.
    pub fn run_packet_with<F: FadingModel>(
        &self,
        packet_index: u64,
        fading: &F,
    ) -> Result<(PacketOutcome, PacketTranscript), ConfigError> {
        let seed = self.cfg.seed;
        let mut channel_rng = stream_rng(seed, packet_stream(packet_index, PacketStream::Channel));
        let mut protocol_rng =
            stream_rng(seed, packet_stream(packet_index, PacketStream::Protocol));
        let mut payload_rng = stream_rng(seed, packet_stream(packet_index, PacketStream::Payload));

        let (topo_storage, gains_storage);
        let (topo, gains): (&Topology, &GainTable) = match (&self.topology, &self.gains) {
            (Some(t), Some(g)) => (t, g),
            _ => {
                topo_storage = self.topology_for_packet(packet_index)?;
                gains_storage = GainTable::build(&topo_storage, &self.params)?;
                (&topo_storage, &gains_storage)
            }
        };

        let payload: [u8; RS_K] = crate::phy::random_payload(&mut payload_rng);
        let true_mother = self.codes.encode_payload(&payload);
        let mother_len = self.codes.mother_len();
        let n_relays = topo.n_relays();
        let strategy = self.cfg.strategy;
        // Relays play no part in a point-to-point campaign.
        let relays_listen = strategy != Strategy::PointToPoint;

        let mut dest_buffer = SoftBuffer::new(mother_len, NodeId::Destination);
        let mut relay_states: Vec<RelayState> = (0..n_relays)
            .map(|i| RelayState::Listening(SoftBuffer::new(mother_len, NodeId::Relay(i))))
            .collect();
        let mut decoded: std::collections::BTreeSet<usize> = Default::default();

        let mut outcome = PacketOutcome {
            success: false,
            rounds_used: 0,
            coded_bits_sent: 0,
            transmitter_per_round: Vec::new(),
            undetected_error: false,
        };
        let mut rounds = Vec::new();

        for round in 0..self.codes.num_rates() {
            let slot = SlotFading::draw(fading, &mut channel_rng, gains, round, relays_listen);

            // Select the round transmitter; round 0 is always the source.
            let selection = if round == 0 {
                SelectionOutcome {
                    transmitter: NodeId::Source,
                    contention: None,
                    eligible_count: 0,
                }
            } else {
                let state = RoundState {
                    decoded: decoded.clone(),
                    gains_to_dest: slot.relay_to_dest.iter().map(|h| h.norm_sqr()).collect(),
                    rate_index: round,
                };
                select_transmitter(strategy, &state, &self.contention, topo, &mut protocol_rng)
            };
            let tx = selection.transmitter;

            let positions = self.codes.round_positions(round);
            let tx_mother: &[u8] = match tx {
                NodeId::Source => &true_mother,
                NodeId::Relay(i) => match &relay_states[i] {
                    RelayState::Decoded { mother } => mother,
                    RelayState::Listening(_) => unreachable!("selected relay must have decoded"),
                },
                NodeId::Destination => unreachable!(),
            };
            let bits: Vec<u8> = positions.iter().map(|&p| tx_mother[p as usize]).collect();

            // Destination reception.
            let h_dest = slot.to_dest(tx);
            let y = transmit(&bits, h_dest, &self.noise, &mut channel_rng);
            dest_buffer.absorb(&demodulate(&y, h_dest, &self.noise, positions));

            // Relay reception (ascending id; half duplex skips the
            // transmitter; already-decoded relays have nothing to gain).
            if relays_listen {
                for r in 0..n_relays {
                    if tx == NodeId::Relay(r) {
                        continue;
                    }
                    if !self.cfg.relay_combining && tx != NodeId::Source {
                        continue;
                    }
                    if let RelayState::Listening(buf) = &mut relay_states[r] {
                        let h = slot.to_relay(tx, r);
                        let y = transmit(&bits, h, &self.noise, &mut channel_rng);
                        buf.absorb(&demodulate(&y, h, &self.noise, positions));
                    }
                }
            }

            outcome.coded_bits_sent += positions.len() as u64;
            outcome.transmitter_per_round.push(tx);
            outcome.rounds_used = round + 1;

            let dest_outcome = attempt_decode(&dest_buffer, &self.codes, &payload);
            rounds.push(RoundRecord {
                round,
                rate_index: round,
                transmitter: tx,
                coded_bits: positions.len(),
                eligible_count: selection.eligible_count,
                minislots_run: selection.contention.map(|_| self.contention.minislots),
                successful_minislots: selection.contention.map(|c| c.successful_minislots),
                dest_success: dest_outcome.success,
            });
            if dest_outcome.success {
                outcome.success = true;
                outcome.undetected_error = dest_outcome.undetected_error;
                break;
            }

            // Relays that heard something new try to decode for the next
            // round's selection.
            if relays_listen && round + 1 < self.codes.num_rates() {
                let new_info_for_relays = self.cfg.relay_combining || tx == NodeId::Source;
                if new_info_for_relays {
                    for r in 0..n_relays {
                        if tx == NodeId::Relay(r) {
                            continue;
                        }
                        if let RelayState::Listening(buf) = &relay_states[r] {
                            let out = attempt_decode(buf, &self.codes, &payload);
                            if out.success {
                                let recovered = out.payload.expect("success carries payload");
                                relay_states[r] = RelayState::Decoded {
                                    mother: self.codes.encode_payload(&recovered),
                                };
                                decoded.insert(r);
                            }
                        }
                    }
                }
            }
        }

        let transcript = PacketTranscript {
            packet_index,
            success: outcome.success,
            undetected_error: outcome.undetected_error,
            rounds,
        };
        Ok((outcome, transcript))
    }
}

/// Aggregate outcomes into campaign metrics.
pub fn compute_metrics(
    outcomes: &[PacketOutcome],
    codes: &CodeChain,
    n_relays: usize,
) -> Result<Metrics, ConfigError> {
    let k = codes.k;
    let period = codes.family.period();
    let memory = codes.conv.memory();
    let n = eq_n(codes);
    let l_av = measure_lav(outcomes, k, period)?;
    let r_avg = throughput(l_av, k, n, period, memory);

    let count = outcomes.len() as f64;
    let ls: Vec<f64> = outcomes
        .iter()
        .map(|o| o.coded_bits_sent as f64 * period as f64 / k as f64 - period as f64)
        .collect();
    let var = if outcomes.len() > 1 {
        ls.iter().map(|l| (l - l_av).powi(2)).sum::<f64>() / (count - 1.0)
    } else {
        0.0
    };
    let se_l = (var / count).sqrt();
    // Delta method: |dr/dl| at l_av.
    let slope = (k as f64 / (n + memory) as f64) * period as f64 / (period as f64 + l_av).powi(2);
    let ci_halfwidth = 1.96 * slope * se_l;

    let mut delivered_bits = 0u64;
    let mut total_coded = 0u64;
    let mut failures = 0u64;
    let mut undetected = 0u64;
    let mut source_tx = 0u64;
    let mut relay_tx = vec![0u64; n_relays];
    for o in outcomes {
        total_coded += o.coded_bits_sent;
        if o.success && !o.undetected_error {
            delivered_bits += k as u64;
        }
        if !o.success {
            failures += 1;
        }
        if o.undetected_error {
            undetected += 1;
        }
        for t in &o.transmitter_per_round {
            match t {
                NodeId::Source => source_tx += 1,
                NodeId::Relay(i) => relay_tx[*i] += 1,
                NodeId::Destination => {}
            }
        }
    }

    Ok(Metrics {
        packets: outcomes.len() as u64,
        l_av,
        r_avg,
        empirical_throughput: delivered_bits as f64 / total_coded as f64,
        outage_rate: failures as f64 / count,
        ci_halfwidth,
        undetected_errors: undetected,
        source_tx_rounds: source_tx,
        relay_tx_rounds: relay_tx,
    })
}

/// Run a full campaign: `n_packets` episodes over pre-split substreams,
/// reduced in packet order.
pub fn run_campaign(cfg: &SimConfig) -> Result<CampaignResult, ConfigError> {
    let sim = PacketSimulator::new(cfg)?;
    let pairs: Result<Vec<(PacketOutcome, PacketTranscript)>, ConfigError> = (0..cfg.n_packets)
        .into_par_iter()
        .map(|i| sim.run_packet(i))
        .collect();
    let pairs = pairs?;
    let (outcomes, transcripts): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
    let metrics = compute_metrics(&outcomes, sim.codes(), cfg.n_relays)?;
    let topology = sim.topology_for_packet(cfg.n_packets.saturating_sub(1))?;
    Ok(CampaignResult {
        metrics,
        topology,
        outcomes,
        transcripts,
    })
}

/// Apply `value` to `axis` on a copy of the base config.
pub fn apply_axis(cfg: &SimConfig, axis: SweepAxis, value: f64) -> Result<SimConfig, ConfigError> {
    let mut point = cfg.clone();
    match axis {
        SweepAxis::FeedbackProb => point.feedback_prob = value,
        SweepAxis::GainThresholdDb => point.gain_threshold_db = value,
        SweepAxis::AvgSnrDb => point.dest_snr_db = value,
        SweepAxis::Minislots => {
            if value < 1.0 || value.fract() != 0.0 {
                return Err(ConfigError::invalid(
                    "minislots",
                    format!("sweep value must be a positive integer, got {value}"),
                ));
            }
            point.minislots = value as usize;
        }
        SweepAxis::NRelays => {
            if value < 1.0 || value.fract() != 0.0 {
                return Err(ConfigError::invalid(
                    "n_relays",
                    format!("sweep value must be a positive integer, got {value}"),
                ));
            }
            point.n_relays = value as usize;
        }
    }
    Ok(point)
}

/// One campaign per axis value. With common random numbers (the default)
/// every point reuses the master seed, so channel realizations are shared
/// across values; otherwise each point derives its own seed.
pub fn sweep(
    cfg: &SimConfig,
    axis: SweepAxis,
    values: &[f64],
) -> Result<Vec<SweepPoint>, ConfigError> {
    let mut points = Vec::with_capacity(values.len());
    for (idx, &value) in values.iter().enumerate() {
        let mut point_cfg = apply_axis(cfg, axis, value)?;
        if !cfg.common_random_numbers {
            point_cfg.seed = sweep_point_seed(cfg.seed, idx as u64);
        }
        let result = run_campaign(&point_cfg)?;
        points.push(SweepPoint {
            axis_value: value,
            config: point_cfg,
            result,
        });
    }
    Ok(points)
}
