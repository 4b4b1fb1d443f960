//! Rate-compatible puncturing tables over the rate-1/3 mother code.
//!
//! A family is an ordered list of 3-row masks over one puncturing period,
//! highest rate first, each mask elementwise contained in the next, the last
//! all ones. The shipped default realizes rates {4/5, 2/3, 4/7, 1/2, 1/3}
//! over period 8: the first generator row is always transmitted, the base
//! rate-4/5 mask adds the second row at columns 0 and 4, and every denser
//! mask adds bits in fixed row-major scan order, so each retransmission
//! round releases exactly the new columns of its rate step.
//!
//! Masks can also be loaded from a plain-text block format, one block per
//! rate, rows = generator index, columns = period position:
//!
//! ```text
//! # rate 4/5
//! 11111111
//! 10001000
//! 00000000
//!
//! 11111111
//! 11101000
//! 00000000
//! ...
//! ```

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum RcpcError {
    #[error("family needs at least one mask")]
    Empty,
    #[error("mask {0} must have 3 rows of equal width, period >= 1")]
    BadShape(usize),
    #[error("mask {0} is not rate-compatible with mask {1}: bit ({2},{3}) disappears")]
    NotNested(usize, usize, usize, usize),
    #[error("mask popcounts must strictly increase, got {0} then {1}")]
    NonIncreasing(usize, usize),
    #[error("final mask must be all ones (the mother code)")]
    MotherNotFull,
    #[error("rate index {0} out of range (family has {1} rates)")]
    RateOutOfRange(usize, usize),
    #[error("mask text line {0}: {1}")]
    Parse(usize, String),
}

/// One puncturing mask: `rows[r][c]` tells whether generator `r` output at
/// period column `c` is transmitted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PuncturingMask {
    rows: [Vec<bool>; 3],
}

impl PuncturingMask {
    pub fn new(rows: [Vec<bool>; 3]) -> Self {
        Self { rows }
    }

    pub fn period(&self) -> usize {
        self.rows[0].len()
    }

    pub fn bit(&self, row: usize, col: usize) -> bool {
        self.rows[row][col]
    }

    pub fn popcount(&self) -> usize {
        self.rows
            .iter()
            .map(|r| r.iter().filter(|&&b| b).count())
            .sum()
    }
}

/// Ordered rate-compatible family, highest rate first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RcpcFamily {
    period: usize,
    masks: Vec<PuncturingMask>,
}

impl RcpcFamily {
    /// The shipped default family: period 8, rates {4/5, 2/3, 4/7, 1/2, 1/3}.
    pub fn standard() -> Self {
        let period = 8;
        let popcounts = [10usize, 12, 14, 16, 24];
        let mut rows = [vec![true; period], vec![false; period], vec![false; period]];
        rows[1][0] = true;
        rows[1][4] = true;
        let mut masks = Vec::with_capacity(popcounts.len());
        for &target in &popcounts {
            // Fill missing bits in row-major scan order up to the target.
            'fill: for r in 0..3 {
                for c in 0..period {
                    let count: usize = rows
                        .iter()
                        .map(|row: &Vec<bool>| row.iter().filter(|&&b| b).count())
                        .sum();
                    if count >= target {
                        break 'fill;
                    }
                    if !rows[r][c] {
                        rows[r][c] = true;
                    }
                }
            }
            masks.push(PuncturingMask::new([
                rows[0].clone(),
                rows[1].clone(),
                rows[2].clone(),
            ]));
        }
        Self::from_masks(masks).expect("default family is valid")
    }

    /// Validate shape, strict popcount growth, rate compatibility (each
    /// mask contained in the next) and the all-ones mother mask.
    pub fn from_masks(masks: Vec<PuncturingMask>) -> Result<Self, RcpcError> {
        if masks.is_empty() {
            return Err(RcpcError::Empty);
        }
        let period = masks[0].period();
        for (i, m) in masks.iter().enumerate() {
            if period == 0 || m.rows.iter().any(|r| r.len() != period) {
                return Err(RcpcError::BadShape(i));
            }
        }
        for i in 1..masks.len() {
            let (prev, cur) = (&masks[i - 1], &masks[i]);
            for r in 0..3 {
                for c in 0..period {
                    if prev.bit(r, c) && !cur.bit(r, c) {
                        return Err(RcpcError::NotNested(i - 1, i, r, c));
                    }
                }
            }
            if prev.popcount() >= cur.popcount() {
                return Err(RcpcError::NonIncreasing(prev.popcount(), cur.popcount()));
            }
        }
        let last = masks.last().unwrap();
        if last.popcount() != 3 * period {
            return Err(RcpcError::MotherNotFull);
        }
        Ok(Self { period, masks })
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn num_rates(&self) -> usize {
        self.masks.len()
    }

    pub fn mask(&self, rate_idx: usize) -> &PuncturingMask {
        &self.masks[rate_idx]
    }

    /// Code rate at `rate_idx` as a reduced fraction `period / popcount`.
    pub fn rate(&self, rate_idx: usize) -> (usize, usize) {
        let num = self.period;
        let den = self.masks[rate_idx].popcount();
        let g = gcd(num, den);
        (num / g, den / g)
    }

    /// Mother-codeword positions transmitted at `rate_idx` (0 = highest
    /// rate) for `k` information bits, strictly increasing. The masks repeat
    /// periodically across the `k + memory` encoder steps.
    pub fn punctured_positions(
        &self,
        rate_idx: usize,
        k: usize,
        memory: usize,
    ) -> Result<Vec<u32>, RcpcError> {
        let mask = self
            .masks
            .get(rate_idx)
            .ok_or(RcpcError::RateOutOfRange(rate_idx, self.masks.len()))?;
        let steps = k + memory;
        let mut out = Vec::with_capacity(steps * mask.popcount() / self.period + 3);
        for t in 0..steps {
            let col = t % self.period;
            for r in 0..3 {
                if mask.bit(r, col) {
                    out.push((3 * t + r) as u32);
                }
            }
        }
        Ok(out)
    }

    /// Positions newly released when stepping from `rate_idx - 1` to
    /// `rate_idx`: the incremental redundancy of that retransmission round.
    pub fn incremental_positions(
        &self,
        rate_idx: usize,
        k: usize,
        memory: usize,
    ) -> Result<Vec<u32>, RcpcError> {
        if rate_idx == 0 || rate_idx >= self.masks.len() {
            return Err(RcpcError::RateOutOfRange(rate_idx, self.masks.len()));
        }
        let prev = &self.masks[rate_idx - 1];
        let cur = &self.masks[rate_idx];
        let steps = k + memory;
        let mut out = Vec::new();
        for t in 0..steps {
            let col = t % self.period;
            for r in 0..3 {
                if cur.bit(r, col) && !prev.bit(r, col) {
                    out.push((3 * t + r) as u32);
                }
            }
        }
        Ok(out)
    }

    /// Render the plain-text block format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, m) in self.masks.iter().enumerate() {
            let (num, den) = self.rate(i);
            out.push_str(&format!("# rate {num}/{den}\n"));
            for r in 0..3 {
                for c in 0..self.period {
                    out.push(if m.bit(r, c) { '1' } else { '0' });
                }
                out.push('\n');
            }
            out.push('\n');
        }
        out
    }

    /// Parse the plain-text block format: blocks of exactly three `0`/`1`
    /// rows separated by blank lines, `#` comments ignored.
    pub fn parse(text: &str) -> Result<Self, RcpcError> {
        let mut masks = Vec::new();
        let mut rows: Vec<Vec<bool>> = Vec::new();
        let mut flush = |rows: &mut Vec<Vec<bool>>, lineno: usize| -> Result<(), RcpcError> {
            if rows.is_empty() {
                return Ok(());
            }
            if rows.len() != 3 {
                return Err(RcpcError::Parse(
                    lineno,
                    format!("mask block has {} rows, expected 3", rows.len()),
                ));
            }
            let mut it = rows.drain(..);
            masks.push(PuncturingMask::new([
                it.next().unwrap(),
                it.next().unwrap(),
                it.next().unwrap(),
            ]));
            drop(it);
            Ok(())
        };
        let mut last_line = 0;
        for (lineno, raw) in text.lines().enumerate() {
            last_line = lineno + 1;
            let line = raw.trim();
            if line.starts_with('#') {
                continue;
            }
            if line.is_empty() {
                flush(&mut rows, lineno + 1)?;
                continue;
            }
            let bits: Result<Vec<bool>, RcpcError> = line
                .chars()
                .map(|ch| match ch {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    _ => Err(RcpcError::Parse(
                        lineno + 1,
                        format!("bad character {ch:?}"),
                    )),
                })
                .collect();
            rows.push(bits?);
        }
        flush(&mut rows, last_line)?;
        Self::from_masks(masks)
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_family_rates_and_popcounts() {
        let fam = RcpcFamily::standard();
        assert_eq!(fam.period(), 8);
        assert_eq!(fam.num_rates(), 5);
        let popcounts: Vec<usize> = (0..5).map(|j| fam.mask(j).popcount()).collect();
        assert_eq!(popcounts, vec![10, 12, 14, 16, 24]);
        let rates: Vec<(usize, usize)> = (0..5).map(|j| fam.rate(j)).collect();
        assert_eq!(rates, vec![(4, 5), (2, 3), (4, 7), (1, 2), (1, 3)]);
    }

    #[test]
    fn standard_family_first_row_always_on() {
        let fam = RcpcFamily::standard();
        for j in 0..fam.num_rates() {
            for c in 0..fam.period() {
                assert!(fam.mask(j).bit(0, c));
            }
        }
    }

    #[test]
    fn nesting_holds_exhaustively() {
        let fam = RcpcFamily::standard();
        for j in 0..fam.num_rates() - 1 {
            for r in 0..3 {
                for c in 0..fam.period() {
                    if fam.mask(j).bit(r, c) {
                        assert!(fam.mask(j + 1).bit(r, c), "rate {j} bit ({r},{c}) lost");
                    }
                }
            }
        }
    }

    #[test]
    fn mother_rate_covers_all_positions() {
        let fam = RcpcFamily::standard();
        let k = 16;
        let m = 6;
        let all = fam.punctured_positions(4, k, m).unwrap();
        let expected: Vec<u32> = (0..3 * (k + m) as u32).collect();
        assert_eq!(all, expected);
    }

    #[test]
    fn highest_rate_position_count_at_k8() {
        // 14 steps (k=8, memory 6): row 0 contributes 14, row 1 columns 0
        // and 4 fire at t in {0, 4, 8, 12}, so 18 positions in total.
        let fam = RcpcFamily::standard();
        let pos = fam.punctured_positions(0, 8, 6).unwrap();
        assert_eq!(pos.len(), 18);
        assert!(pos.windows(2).all(|w| w[0] < w[1]));
        // Subset of the next rate.
        let next = fam.punctured_positions(1, 8, 6).unwrap();
        assert!(pos.iter().all(|p| next.binary_search(p).is_ok()));
    }

    #[test]
    fn incremental_positions_telescope() {
        let fam = RcpcFamily::standard();
        let (k, m) = (32, 6);
        let mut acc = fam.punctured_positions(0, k, m).unwrap();
        for j in 1..fam.num_rates() {
            let inc = fam.incremental_positions(j, k, m).unwrap();
            // Disjoint from everything released so far.
            for p in &inc {
                assert!(acc.binary_search(p).is_err());
            }
            acc.extend(&inc);
            acc.sort_unstable();
            assert_eq!(acc, fam.punctured_positions(j, k, m).unwrap());
        }
        assert_eq!(acc.len(), 3 * (k + m));
    }

    #[test]
    fn incremental_popcounts_per_period() {
        let fam = RcpcFamily::standard();
        // One full period (k = 8 uses 14 steps; use k = period * n - m trick:
        // count over exactly 8 steps via k + m = 8 -> k = 2).
        let per_period: Vec<usize> = (1..5)
            .map(|j| fam.incremental_positions(j, 2, 6).unwrap().len())
            .collect();
        assert_eq!(per_period, vec![2, 2, 2, 8]);
    }

    #[test]
    fn rejects_non_nested_masks() {
        let a = PuncturingMask::new([vec![true, true], vec![true, false], vec![false, false]]);
        let b = PuncturingMask::new([vec![true, true], vec![false, true], vec![true, true]]);
        let full = PuncturingMask::new([vec![true, true], vec![true, true], vec![true, true]]);
        assert!(matches!(
            RcpcFamily::from_masks(vec![a, b, full]),
            Err(RcpcError::NotNested(0, 1, 1, 0))
        ));
    }

    #[test]
    fn rejects_family_without_full_mother() {
        let a = PuncturingMask::new([vec![true], vec![false], vec![false]]);
        let b = PuncturingMask::new([vec![true], vec![true], vec![false]]);
        assert_eq!(
            RcpcFamily::from_masks(vec![a, b]),
            Err(RcpcError::MotherNotFull)
        );
    }

    #[test]
    fn text_round_trip() {
        let fam = RcpcFamily::standard();
        let text = fam.to_text();
        assert_eq!(RcpcFamily::parse(&text).unwrap(), fam);
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(RcpcFamily::parse("11\n01\n").is_err()); // 2-row block
        assert!(RcpcFamily::parse("11\nx1\n11\n").is_err()); // bad char
    }

    #[test]
    fn rate_index_out_of_range() {
        let fam = RcpcFamily::standard();
        assert!(fam.punctured_positions(5, 8, 6).is_err());
        assert!(fam.incremental_positions(0, 8, 6).is_err());
    }
}
