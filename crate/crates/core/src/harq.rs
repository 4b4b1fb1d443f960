//! Per-receiver soft-information state across retransmission rounds.
//!
//! Every receiver keeps one LLR accumulator over the mother codeword for the
//! lifetime of a packet. Observations add into it (maximal-ratio combining;
//! under the incremental schedule positions are disjoint across rounds, so
//! the add is also a plain fill-in), and decoding always runs over the full
//! accumulator with unreceived positions as zero-LLR erasures.

use crate::fec::{bits_to_bytes_msb, viterbi_decode, CodeChain, RS_K, RS_N};
use crate::phy::SoftObservation;
use crate::topology::NodeId;

/// LLR accumulator for one (receiver, packet) pair.
#[derive(Debug, Clone, PartialEq)]
pub struct SoftBuffer {
    llr_acc: Vec<f64>,
    received: Vec<bool>,
    owner: NodeId,
}

impl SoftBuffer {
    pub fn new(mother_len: usize, owner: NodeId) -> Self {
        Self {
            llr_acc: vec![0.0; mother_len],
            received: vec![false; mother_len],
            owner,
        }
    }

    pub fn owner(&self) -> NodeId {
        self.owner
    }

    pub fn llrs(&self) -> &[f64] {
        &self.llr_acc
    }

    pub fn received_mask(&self) -> &[bool] {
        &self.received
    }

    pub fn received_count(&self) -> usize {
        self.received.iter().filter(|&&r| r).count()
    }

    /// Add an observation into the accumulator. Positions out of range are
    /// a programming fault.
    pub fn absorb(&mut self, obs: &SoftObservation) {
        for (&p, &llr) in obs.positions().iter().zip(obs.llrs()) {
            let idx = p as usize;
            assert!(idx < self.llr_acc.len(), "position {idx} out of range");
            self.llr_acc[idx] += llr;
            self.received[idx] = true;
        }
    }
}

/// Result of one concatenated decode attempt.
#[derive(Debug, Clone, PartialEq)]
pub struct DecodeOutcome {
    /// The outer decoder produced a consistent codeword (this is what the
    /// protocol sees: ACK on success, NACK otherwise).
    pub success: bool,
    /// Decoded payload when successful.
    pub payload: Option<[u8; RS_K]>,
    /// Genie flag: success whose payload differs from the true message.
    /// Metrics only; never fed back into protocol decisions.
    pub undetected_error: bool,
}

/// Run the inner Viterbi over the accumulated LLRs, deserialize, and decode
/// the outer code. Success is outer-decoder consistency alone; the genie
/// comparison against `true_payload` only annotates the outcome.
pub fn attempt_decode(
    buffer: &SoftBuffer,
    codes: &CodeChain,
    true_payload: &[u8; RS_K],
) -> DecodeOutcome {
    let info = viterbi_decode(buffer.llrs(), &codes.conv);
    let bytes = bits_to_bytes_msb(&info);
    debug_assert_eq!(bytes.len(), RS_N);
    let word: [u8; RS_N] = bytes.try_into().expect("inner block is one RS codeword");
    match codes.rs.decode(&word) {
        Ok(payload) => DecodeOutcome {
            success: true,
            undetected_error: payload != *true_payload,
            payload: Some(payload),
        },
        Err(_) => DecodeOutcome {
            success: false,
            payload: None,
            undetected_error: false,
        },
    }
}
