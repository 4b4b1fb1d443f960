//! Concatenated coding chain: a rate-compatible punctured convolutional
//! inner code with soft ML decoding over a (255, 239) Reed-Solomon outer
//! code. One RS codeword (255 bytes, serialized MSB-first) forms the inner
//! information block, so `k = 2040` bits per packet.

pub mod conv;
pub mod gf256;
pub mod rcpc;
pub mod rs;

pub use conv::{viterbi_decode, ConvCode, ConvCodeError};
pub use rcpc::{PuncturingMask, RcpcError, RcpcFamily};
pub use rs::{DecodeFailure, RsCode, RS_K, RS_N, RS_T};

/// Serialize bytes to bits, most significant bit first.
pub fn bytes_to_bits_msb(bytes: &[u8]) -> Vec<u8> {
    let mut bits = Vec::with_capacity(bytes.len() * 8);
    for &b in bytes {
        for i in (0..8).rev() {
            bits.push((b >> i) & 1);
        }
    }
    bits
}

/// Pack bits (MSB first) back into bytes; the length must be a multiple of 8.
pub fn bits_to_bytes_msb(bits: &[u8]) -> Vec<u8> {
    assert_eq!(bits.len() % 8, 0, "bit count must be a multiple of 8");
    bits.chunks_exact(8)
        .map(|chunk| chunk.iter().fold(0u8, |acc, &b| (acc << 1) | (b & 1)))
        .collect()
}

/// The full chain plus the per-rate position tables for a fixed `k`.
#[derive(Debug, Clone)]
pub struct CodeChain {
    pub conv: ConvCode,
    pub family: RcpcFamily,
    pub rs: RsCode,
    /// Inner information block length in bits (= 8 * 255).
    pub k: usize,
    positions: Vec<Vec<u32>>,
    incremental: Vec<Vec<u32>>,
}

impl CodeChain {
    /// The reference chain: standard convolutional code, standard RCPC
    /// family, (255, 239) Reed-Solomon outer code.
    pub fn standard() -> Self {
        Self::new(ConvCode::standard(), RcpcFamily::standard())
    }

    pub fn new(conv: ConvCode, family: RcpcFamily) -> Self {
        let k = RS_N * 8;
        let m = conv.memory();
        let positions: Vec<Vec<u32>> = (0..family.num_rates())
            .map(|j| {
                family
                    .punctured_positions(j, k, m)
                    .expect("valid rate index")
            })
            .collect();
        let incremental: Vec<Vec<u32>> = (1..family.num_rates())
            .map(|j| {
                family
                    .incremental_positions(j, k, m)
                    .expect("valid rate index")
            })
            .collect();
        Self {
            conv,
            family,
            rs: RsCode::new(),
            k,
            positions,
            incremental,
        }
    }

    pub fn num_rates(&self) -> usize {
        self.family.num_rates()
    }

    /// Mother codeword length in bits.
    pub fn mother_len(&self) -> usize {
        self.conv.codeword_len(self.k)
    }

    /// Positions transmitted cumulatively through rate step `rate_idx`.
    pub fn positions(&self, rate_idx: usize) -> &[u32] {
        &self.positions[rate_idx]
    }

    /// Positions newly released at rate step `rate_idx` (>= 1).
    pub fn incremental(&self, rate_idx: usize) -> &[u32] {
        &self.incremental[rate_idx - 1]
    }

    /// Positions a transmitter sends in round `round_idx` (0-based): the
    /// full rate-0 set first, then each incremental batch.
    pub fn round_positions(&self, round_idx: usize) -> &[u32] {
        if round_idx == 0 {
            self.positions(0)
        } else {
            self.incremental(round_idx)
        }
    }

    /// RS-encode a payload and produce the mother codeword bits.
    pub fn encode_payload(&self, payload: &[u8; RS_K]) -> Vec<u8> {
        let word = self.rs.encode(payload);
        self.conv.encode(&bytes_to_bits_msb(&word))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bit_packing_round_trip() {
        let bytes: Vec<u8> = (0..=255u8).collect();
        assert_eq!(bits_to_bytes_msb(&bytes_to_bits_msb(&bytes)), bytes);
        assert_eq!(bytes_to_bits_msb(&[0xA5]), vec![1, 0, 1, 0, 0, 1, 0, 1]);
    }

    #[test]
    fn chain_dimensions() {
        let chain = CodeChain::standard();
        assert_eq!(chain.k, 2040);
        assert_eq!(chain.mother_len(), 3 * (2040 + 6));
        assert_eq!(chain.positions(4).len(), chain.mother_len());
        // Round 0 releases 2558 positions: 255 full periods of 10 plus the
        // 6-step tail (6 from row 0, columns 0 and 4 of row 1).
        assert_eq!(chain.positions(0).len(), 2558);
        let total: usize = (0..5).map(|r| chain.round_positions(r).len()).sum();
        assert_eq!(total, chain.mother_len());
    }

    #[test]
    fn encode_payload_round_trips_noiselessly_at_every_rate() {
        use rand::prelude::*;
        let chain = CodeChain::standard();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        let mut payload = [0u8; RS_K];
        rng.fill(&mut payload[..]);
        let mother = chain.encode_payload(&payload);
        for rate_idx in 0..chain.num_rates() {
            let mut llrs = vec![0.0f64; chain.mother_len()];
            for &p in chain.positions(rate_idx) {
                llrs[p as usize] = if mother[p as usize] == 0 { 3.0 } else { -3.0 };
            }
            let info = viterbi_decode(&llrs, &chain.conv);
            let bytes = bits_to_bytes_msb(&info);
            let word: [u8; RS_N] = bytes.try_into().unwrap();
            assert_eq!(chain.rs.decode(&word).unwrap(), payload, "rate {rate_idx}");
        }
    }
}
