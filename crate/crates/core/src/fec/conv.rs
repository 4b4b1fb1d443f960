//! Feedforward convolutional encoder and soft-decision ML (Viterbi) decoder.
//!
//! The decoder maximizes the correlation metric `sum (1 - 2 x_p) llr_p` over
//! all zero-tailed codewords, so punctured positions simply carry LLR 0 and
//! add nothing. Exact metric ties are broken toward the lexicographically
//! smaller information sequence; the tie rule is implemented by walking both
//! survivor histories back to their common ancestor, which keeps ordinary
//! decoding free of any tie bookkeeping.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ConvCodeError {
    #[error("memory must be in 1..=16, got {0}")]
    BadMemory(usize),
    #[error("generator {0:#o} does not fit constraint length {1}")]
    GeneratorTooWide(u32, usize),
    #[error("generator must have a current-input tap (msb set): {0:#o}")]
    MissingLeadingTap(u32),
}

/// Rate-1/3 feedforward convolutional code with zero-tail termination.
///
/// Generators are given as octal-style integers whose most significant bit
/// (bit `memory`) taps the current input, matching the usual listing
/// convention for constraint-length-7 codes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvCode {
    memory: usize,
    generators: [u32; 3],
    /// Output bit triple (packed low bit = first generator) for each
    /// register value `(input << memory) | state`.
    outputs: Vec<u8>,
    /// Every generator taps both the current input and the oldest register
    /// bit, enabling the +/-g butterfly in the decoder.
    antipodal: bool,
}

impl ConvCode {
    /// The memory-6 code with generators (145, 171, 133) in octal.
    pub fn standard() -> Self {
        Self::new(6, [0o145, 0o171, 0o133]).expect("standard code parameters are valid")
    }

    pub fn new(memory: usize, generators: [u32; 3]) -> Result<Self, ConvCodeError> {
        if memory == 0 || memory > 16 {
            return Err(ConvCodeError::BadMemory(memory));
        }
        for &g in &generators {
            if g >> (memory + 1) != 0 {
                return Err(ConvCodeError::GeneratorTooWide(g, memory + 1));
            }
            if g >> memory == 0 {
                return Err(ConvCodeError::MissingLeadingTap(g));
            }
        }
        let regs = 1usize << (memory + 1);
        let mut outputs = vec![0u8; regs];
        for (reg, out) in outputs.iter_mut().enumerate() {
            let mut triple = 0u8;
            for (gi, &g) in generators.iter().enumerate() {
                let parity = (reg as u32 & g).count_ones() & 1;
                triple |= (parity as u8) << gi;
            }
            *out = triple;
        }
        let antipodal = generators.iter().all(|g| g & 1 == 1);
        Ok(Self {
            memory,
            generators,
            outputs,
            antipodal,
        })
    }

    pub fn memory(&self) -> usize {
        self.memory
    }

    pub fn generators(&self) -> [u32; 3] {
        self.generators
    }

    pub fn num_states(&self) -> usize {
        1 << self.memory
    }

    /// Mother codeword length for `k` information bits (zero tail included).
    pub fn codeword_len(&self, k: usize) -> usize {
        3 * (k + self.memory)
    }

    /// Output triple for register `(input << memory) | state`, where the
    /// state holds the previous `memory` inputs, newest in the top bit.
    #[inline]
    fn output_triple(&self, input: u8, state: u32) -> u8 {
        self.outputs[(((input as u32) << self.memory) | state) as usize]
    }

    /// Zero-tail encode: `k` information bits followed by `memory` flush
    /// zeros, three output bits per step in generator order.
    pub fn encode(&self, info: &[u8]) -> Vec<u8> {
        let k = info.len();
        let mut out = Vec::with_capacity(self.codeword_len(k));
        let mut state = 0u32;
        let top = self.memory - 1;
        for t in 0..k + self.memory {
            let input = if t < k { info[t] & 1 } else { 0 };
            let triple = self.output_triple(input, state);
            out.push(triple & 1);
            out.push((triple >> 1) & 1);
            out.push((triple >> 2) & 1);
            state = ((input as u32) << top) | (state >> 1);
        }
        out
    }
}

/// Soft-decision ML decoding of a zero-tailed codeword. `llrs` must hold
/// `3 * (k + memory)` entries (positive favors bit 0, zero is an erasure);
/// returns the `k` decoded information bits.
pub fn viterbi_decode(llrs: &[f64], code: &ConvCode) -> Vec<u8> {
    assert_eq!(llrs.len() % 3, 0, "llr length must be a multiple of 3");
    let steps = llrs.len() / 3;
    let m = code.memory;
    assert!(steps > m, "codeword shorter than the flush tail");
    if code.antipodal {
        match m {
            4 => return viterbi_impl::<16, true>(llrs, code, steps),
            6 => return viterbi_impl::<64, true>(llrs, code, steps),
            8 => return viterbi_impl::<256, true>(llrs, code, steps),
            _ => {}
        }
    }
    match m {
        4 => viterbi_impl::<16, false>(llrs, code, steps),
        6 => viterbi_impl::<64, false>(llrs, code, steps),
        8 => viterbi_impl::<256, false>(llrs, code, steps),
        _ => viterbi_impl_dyn(llrs, code, steps),
    }
}

/// Fixed-state-count decoder core; `STATES` must equal `1 << memory`.
///
/// `ANTIPODAL` exploits generators that all tap both the current input and
/// the oldest register bit: flipping either bit inverts the whole output
/// triple, so one branch metric `g` serves the entire butterfly as +/-g
/// (bit-exactly, since IEEE rounding is symmetric under negation).
fn viterbi_impl<const STATES: usize, const ANTIPODAL: bool>(
    llrs: &[f64],
    code: &ConvCode,
    steps: usize,
) -> Vec<u8> {
    let m = code.memory;
    debug_assert_eq!(STATES, 1 << m);
    let k = steps - m;
    let state_mask = (STATES - 1) as u32;
    let top = m - 1;

    // Transition tables per destination state: output triple when arriving
    // from the even predecessor (oldest bit 0) and the odd one.
    let mut pat0 = [0u8; STATES];
    let mut pat1 = [0u8; STATES];
    for ns in 0..STATES {
        let input = (ns >> top) as u8;
        let s0 = ((ns as u32) << 1) & state_mask;
        pat0[ns] = code.output_triple(input, s0);
        pat1[ns] = code.output_triple(input, s0 | 1);
    }

    let mut metrics = [f64::NEG_INFINITY; STATES];
    let mut next = [f64::NEG_INFINITY; STATES];
    metrics[0] = 0.0;
    // decisions[t] bit s = chosen oldest-bit of the survivor entering state
    // s at time t + 1.
    let mut decisions = vec![0u64; steps];
    let half = STATES >> 1;

    for t in 0..steps {
        // Branch metric for each of the 8 output triples at this step:
        // bm = sum over the three positions of (1 - 2 bit) * llr.
        let l0 = llrs[3 * t];
        let l1 = llrs[3 * t + 1];
        let l2 = llrs[3 * t + 2];
        let mut bm = [0.0f64; 8];
        for (pat, slot) in bm.iter_mut().enumerate() {
            let c0 = if pat & 1 == 0 { l0 } else { -l0 };
            let c1 = if pat & 2 == 0 { l1 } else { -l1 };
            let c2 = if pat & 4 == 0 { l2 } else { -l2 };
            *slot = c0 + (c1 + c2);
        }

        // Gather this step's branch metric per butterfly so the selection
        // loop below stays branch-free.
        let mut g0 = [0.0f64; STATES];
        if ANTIPODAL {
            for h in 0..half {
                g0[h] = bm[pat0[h] as usize];
            }
        } else {
            for h in 0..half {
                g0[h] = bm[pat0[h] as usize];
                g0[h + half] = bm[pat1[h] as usize];
            }
        }

        let flush = t >= k;
        let mut dec = 0u64;
        let mut eq = 0u64;
        // Butterfly: destination states h and h + half share predecessors
        // (2h, 2h+1); flush steps admit only input 0 (the lower half).
        // Selections are branchless; exact ties (including the trivial
        // minus-infinity ones of the warmup steps) are flagged in `eq` and
        // resolved afterwards.
        if flush {
            for h in 0..half {
                let a = metrics[2 * h];
                let b = metrics[2 * h + 1];
                let g = g0[h];
                let (m0, m1) = if ANTIPODAL {
                    (a + g, b - g)
                } else {
                    (a + g, b + g0[h + half])
                };
                dec |= ((m1 > m0) as u64) << h;
                eq |= ((m0 == m1) as u64) << h;
                next[h] = m0.max(m1);
                next[h + half] = f64::NEG_INFINITY;
            }
        } else {
            for h in 0..half {
                let a = metrics[2 * h];
                let b = metrics[2 * h + 1];
                let g = g0[h];
                let (m0, m1) = if ANTIPODAL {
                    (a + g, b - g)
                } else {
                    (a + g, b + g0[h + half])
                };
                dec |= ((m1 > m0) as u64) << h;
                eq |= ((m0 == m1) as u64) << h;
                next[h] = m0.max(m1);

                let hi = h + half;
                let (m0h, m1h) = if ANTIPODAL {
                    (a - g, b + g)
                } else {
                    (a + bm[pat0[hi] as usize], b + bm[pat1[hi] as usize])
                };
                dec |= ((m1h > m0h) as u64) << hi;
                eq |= ((m0h == m1h) as u64) << hi;
                next[hi] = m0h.max(m1h);
            }
        }

        // Rare path: resolve exact ties between reachable survivors toward
        // the lexicographically smaller history. Tied candidates carry the
        // same metric, so only the decision bit can change.
        while eq != 0 {
            let ns = eq.trailing_zeros() as usize;
            eq &= eq - 1;
            // Unreachable-state "ties" are minus infinity on both sides.
            if next[ns] != f64::NEG_INFINITY {
                let s0 = ((ns << 1) & (STATES - 1)) as u32;
                let take1 = tie_break(&decisions, t, s0, s0 | 1, state_mask, top);
                dec = (dec & !(1 << ns)) | ((take1 as u64) << ns);
            }
        }

        decisions[t] = dec;
        std::mem::swap(&mut metrics, &mut next);
    }

    traceback(&decisions, k, steps, state_mask, top)
}

/// Fallback for unusual memory orders; same algorithm over heap state.
fn viterbi_impl_dyn(llrs: &[f64], code: &ConvCode, steps: usize) -> Vec<u8> {
    let m = code.memory;
    let k = steps - m;
    let n_states = 1usize << m;
    let state_mask = (n_states - 1) as u32;
    let top = m - 1;

    let mut metrics = vec![f64::NEG_INFINITY; n_states];
    let mut next = vec![f64::NEG_INFINITY; n_states];
    metrics[0] = 0.0;
    let mut decisions = vec![0u64; steps];

    for t in 0..steps {
        let l0 = llrs[3 * t];
        let l1 = llrs[3 * t + 1];
        let l2 = llrs[3 * t + 2];
        let mut bm = [0.0f64; 8];
        for (pat, slot) in bm.iter_mut().enumerate() {
            let c0 = if pat & 1 == 0 { l0 } else { -l0 };
            let c1 = if pat & 2 == 0 { l1 } else { -l1 };
            let c2 = if pat & 4 == 0 { l2 } else { -l2 };
            *slot = c0 + (c1 + c2);
        }
        let live = if t < k { n_states } else { n_states >> 1 };
        let mut dec = 0u64;
        for ns in 0..live {
            let input = (ns >> top) as u8;
            let s0 = ((ns as u32) << 1) & state_mask;
            let s1 = s0 | 1;
            let m0 = metrics[s0 as usize] + bm[code.output_triple(input, s0) as usize];
            let m1 = metrics[s1 as usize] + bm[code.output_triple(input, s1) as usize];
            let pick_one = if m1 > m0 {
                true
            } else if m0 > m1 || m0 == f64::NEG_INFINITY {
                false
            } else {
                tie_break(&decisions, t, s0, s1, state_mask, top)
            };
            if pick_one {
                dec |= 1 << ns;
                next[ns] = m1;
            } else {
                next[ns] = m0;
            }
        }
        for slot in next.iter_mut().take(n_states).skip(live) {
            *slot = f64::NEG_INFINITY;
        }
        decisions[t] = dec;
        std::mem::swap(&mut metrics, &mut next);
    }

    traceback(&decisions, k, steps, state_mask, top)
}

/// Zero tail pins the final state; trace back from state 0.
fn traceback(decisions: &[u64], k: usize, steps: usize, state_mask: u32, top: usize) -> Vec<u8> {
    let mut info = vec![0u8; k];
    let mut state = 0u32;
    for t in (0..steps).rev() {
        if t < k {
            info[t] = (state >> top) as u8;
        }
        let oldest = ((decisions[t] >> state) & 1) as u32;
        state = ((state << 1) & state_mask) | oldest;
    }
    info
}

/// True iff the survivor history ending in `b` at time `t` is
/// lexicographically smaller than the one ending in `a`.
///
/// Survivor histories form a tree, so the two paths coincide exactly up to
/// their common ancestor; the path taking input 0 out of the ancestor is the
/// smaller one. States at time `tau` hold inputs `u[tau-1] ..`, newest in
/// the top bit, so the comparison reads the top bits just before the walk
/// converges.
#[cold]
fn tie_break(decisions: &[u64], t: usize, a: u32, b: u32, state_mask: u32, top: usize) -> bool {
    let mut a = a;
    let mut b = b;
    let mut tau = t;
    while a != b {
        if tau == 0 {
            // Both trellises start in state 0; distinct states at time 0
            // are unreachable and ordering is immaterial.
            return false;
        }
        tau -= 1;
        let pa = ((a << 1) & state_mask) | ((decisions[tau] >> a) & 1) as u32;
        let pb = ((b << 1) & state_mask) | ((decisions[tau] >> b) & 1) as u32;
        if pa == pb {
            // Histories agree before `tau`; they diverge on the input at
            // `tau`, which sits in the top state bit at `tau + 1`.
            return (b >> top) < (a >> top);
        }
        a = pa;
        b = pb;
    }
    false
}
