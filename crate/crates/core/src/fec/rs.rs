//! Systematic (255, 239) Reed-Solomon code over GF(2^8), correcting up to
//! 8 symbol errors. Decoding is syndrome-based: Berlekamp-Massey for the
//! error locator, Chien search for the roots, Forney for the magnitudes.
//!
//! `decode` returns a value-level [`DecodeFailure`] whenever the algebra is
//! inconsistent (locator degree mismatch, non-zero syndromes after
//! correction). Patterns beyond 8 errors usually fail this way; the rare
//! miscorrection onto a different codeword is undetectable here by design
//! and is measured upstream by genie comparison.

use super::gf256;

pub const RS_N: usize = 255;
pub const RS_K: usize = 239;
pub const RS_PARITY: usize = RS_N - RS_K;
pub const RS_T: usize = RS_PARITY / 2;

/// Decoder could not produce a consistent codeword.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecodeFailure;

impl std::fmt::Display for DecodeFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Reed-Solomon decode failure")
    }
}

impl std::error::Error for DecodeFailure {}

/// The (255, 239) codec. Construction precomputes the generator polynomial
/// with roots alpha^1 .. alpha^16.
#[derive(Debug, Clone)]
pub struct RsCode {
    /// Generator polynomial, low-degree first, degree = RS_PARITY.
    generator: [u8; RS_PARITY + 1],
}

impl Default for RsCode {
    fn default() -> Self {
        Self::new()
    }
}

impl RsCode {
    pub fn new() -> Self {
        let mut g = [0u8; RS_PARITY + 1];
        g[0] = 1;
        let mut deg = 0usize;
        for i in 1..=RS_PARITY {
            // g *= (x + alpha^i)
            let root = gf256::alpha_pow(i as i32);
            let mut next = [0u8; RS_PARITY + 1];
            for j in 0..=deg {
                next[j + 1] ^= g[j];
                next[j] ^= gf256::mul(g[j], root);
            }
            g = next;
            deg += 1;
        }
        Self { generator: g }
    }

    /// Systematic encoding: codeword = payload followed by 16 parity bytes.
    ///
    /// Polynomial convention: codeword index `i` is the coefficient of
    /// `x^(254 - i)`, i.e. the payload occupies the high-degree terms and
    /// parity is the remainder of `payload(x) * x^16` modulo the generator.
    pub fn encode(&self, payload: &[u8; RS_K]) -> [u8; RS_N] {
        let mut parity = [0u8; RS_PARITY];
        for &byte in payload.iter() {
            let feedback = byte ^ parity[0];
            parity.rotate_left(1);
            parity[RS_PARITY - 1] = 0;
            if feedback != 0 {
                for (p, &g) in parity
                    .iter_mut()
                    .zip(self.generator[..RS_PARITY].iter().rev())
                {
                    *p ^= gf256::mul(feedback, g);
                }
            }
        }
        let mut out = [0u8; RS_N];
        out[..RS_K].copy_from_slice(payload);
        out[RS_K..].copy_from_slice(&parity);
        out
    }

    /// Correct up to 8 symbol errors in `word`; returns the payload or a
    /// [`DecodeFailure`] value when no consistent correction exists.
    pub fn decode(&self, word: &[u8; RS_N]) -> Result<[u8; RS_K], DecodeFailure> {
        // Coefficients low-degree first: c[j] = word[254 - j].
        let mut c = [0u8; RS_N];
        for (j, coeff) in c.iter_mut().enumerate() {
            *coeff = word[RS_N - 1 - j];
        }

        // Syndromes S_i = c(alpha^i), i = 1..=16.
        let mut syndromes = [0u8; RS_PARITY];
        let mut all_zero = true;
        for (i, s) in syndromes.iter_mut().enumerate() {
            *s = gf256::poly_eval(&c, gf256::alpha_pow(i as i32 + 1));
            all_zero &= *s == 0;
        }
        if all_zero {
            let mut payload = [0u8; RS_K];
            payload.copy_from_slice(&word[..RS_K]);
            return Ok(payload);
        }

        let (lambda, lambda_deg) = berlekamp_massey(&syndromes);
        if lambda_deg == 0 || lambda_deg > RS_T {
            return Err(DecodeFailure);
        }

        // Chien search: error at position j (coefficient index) iff
        // lambda(alpha^-j) = 0.
        let mut err_pos = [0usize; RS_T];
        let mut n_err = 0usize;
        for j in 0..RS_N {
            if gf256::poly_eval(&lambda[..=lambda_deg], gf256::alpha_pow(-(j as i32))) == 0 {
                if n_err == RS_T {
                    return Err(DecodeFailure);
                }
                err_pos[n_err] = j;
                n_err += 1;
            }
        }
        if n_err != lambda_deg {
            return Err(DecodeFailure);
        }

        // Omega(x) = S(x) * lambda(x) mod x^16.
        let mut omega = [0u8; RS_PARITY];
        for i in 0..=lambda_deg {
            if lambda[i] == 0 {
                continue;
            }
            for j in 0..RS_PARITY - i {
                omega[i + j] ^= gf256::mul(lambda[i], syndromes[j]);
            }
        }

        // Formal derivative of lambda (characteristic 2: odd terms survive).
        let mut lambda_deriv = [0u8; RS_PARITY];
        for i in (1..=lambda_deg).step_by(2) {
            lambda_deriv[i - 1] = lambda[i];
        }

        // Forney: e_j = Omega(Xj^-1) / lambda'(Xj^-1) with Xj = alpha^j.
        let mut corrected = *word;
        for &pos in &err_pos[..n_err] {
            let x_inv = gf256::alpha_pow(-(pos as i32));
            let num = gf256::poly_eval(&omega, x_inv);
            let den = gf256::poly_eval(&lambda_deriv, x_inv);
            if den == 0 {
                return Err(DecodeFailure);
            }
            corrected[RS_N - 1 - pos] ^= gf256::div(num, den);
        }

        // Re-validate: all syndromes of the corrected word must vanish.
        for (j, coeff) in c.iter_mut().enumerate() {
            *coeff = corrected[RS_N - 1 - j];
        }
        for i in 1..=RS_PARITY {
            if gf256::poly_eval(&c, gf256::alpha_pow(i as i32)) != 0 {
                return Err(DecodeFailure);
            }
        }

        let mut payload = [0u8; RS_K];
        payload.copy_from_slice(&corrected[..RS_K]);
        Ok(payload)
    }
}

/// Berlekamp-Massey: shortest LFSR (error locator) generating the syndrome
/// sequence. Returns the locator (low-degree first) and its degree.
fn berlekamp_massey(syndromes: &[u8; RS_PARITY]) -> ([u8; RS_PARITY + 1], usize) {
    let mut lambda = [0u8; RS_PARITY + 1];
    lambda[0] = 1;
    let mut prev = lambda;
    let mut l = 0usize;
    let mut m = 1usize;
    let mut b = 1u8;

    for n in 0..RS_PARITY {
        let mut delta = syndromes[n];
        for i in 1..=l {
            delta ^= gf256::mul(lambda[i], syndromes[n - i]);
        }
        if delta == 0 {
            m += 1;
        } else if 2 * l <= n {
            let t = lambda;
            let scale = gf256::div(delta, b);
            for i in 0..=RS_PARITY - m {
                lambda[i + m] ^= gf256::mul(scale, prev[i]);
            }
            l = n + 1 - l;
            prev = t;
            b = delta;
            m = 1;
        } else {
            let scale = gf256::div(delta, b);
            for i in 0..=RS_PARITY - m {
                lambda[i + m] ^= gf256::mul(scale, prev[i]);
            }
            m += 1;
        }
    }
    (lambda, l)
}
