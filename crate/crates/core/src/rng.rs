//! Seeded random streams.
//!
//! One master seed drives a whole campaign. Independent substreams are
//! derived through the ChaCha stream index, never by reseeding, so adding
//! draws in one place cannot perturb another. The allocation rule:
//!
//! * stream 0 — campaign-level topology placement;
//! * packet `i` owns four streams starting at `1 + 4 i`:
//!   `+0` channel (fading and noise), `+1` protocol (contention draws),
//!   `+2` payload bytes, `+3` per-packet topology redraw (when enabled).
//!
//! ChaCha8 is used throughout: it is fast, has a stable portable output
//! sequence, and its 2^64 stream space makes the split collision-free.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Campaign-level topology stream.
pub const TOPOLOGY_STREAM: u64 = 0;

/// Substream roles within a packet.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PacketStream {
    Channel,
    Protocol,
    Payload,
    Topology,
}

/// Stream index for substream `role` of packet `packet_index`.
pub fn packet_stream(packet_index: u64, role: PacketStream) -> u64 {
    let sub = match role {
        PacketStream::Channel => 0,
        PacketStream::Protocol => 1,
        PacketStream::Payload => 2,
        PacketStream::Topology => 3,
    };
    1 + packet_index.checked_mul(4).expect("packet index overflow") + sub
}

/// RNG positioned on `stream` of the generator keyed by `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Derived seed for sweep point `index` when common random numbers are
/// disabled (splitmix-style mixing of the master seed).
pub fn sweep_point_seed(master_seed: u64, index: u64) -> u64 {
    let mut z = master_seed ^ (index.wrapping_add(1)).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
