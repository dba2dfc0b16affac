//! Gray-code enumeration kernels.
//!
//! [`BinaryGray`] yields, for steps `1..2^n`, the bit that flips between
//! consecutive codewords of the binary-reflected Gray code (the number of
//! trailing zeros of the step index). [`MixedRadixGray`] is the reflected
//! generalisation to digit ranges `0..m_i`: every step moves one digit by
//! exactly one.

/// Flip positions of the `n`-bit binary-reflected Gray code.
#[derive(Debug, Clone)]
pub struct BinaryGray {
    step: u64,
    end: u64,
}

impl BinaryGray {
    pub fn new(bits: u32) -> Self {
        assert!(bits < 64);
        BinaryGray { step: 1, end: 1u64 << bits }
    }
}

impl Iterator for BinaryGray {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        if self.step >= self.end {
            return None;
        }
        let bit = self.step.trailing_zeros();
        self.step += 1;
        Some(bit)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.end - self.step) as usize;
        (left, Some(left))
    }
}

/// One step of a mixed-radix Gray walk: `digit` moved from `from` to `to`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DigitChange {
    pub digit: usize,
    pub from: u32,
    pub to: u32,
}

/// Reflected mixed-radix Gray code over `0..radix[0] x 0..radix[1] x ...`,
/// starting at all zeros. Visits every tuple exactly once.
#[derive(Debug, Clone)]
pub struct MixedRadixGray {
    radix: Vec<u32>,
    digits: Vec<u32>,
    rising: Vec<bool>,
    done: bool,
}

impl MixedRadixGray {
    pub fn new(radix: &[u32]) -> Self {
        assert!(radix.iter().all(|&m| m >= 1));
        MixedRadixGray {
            radix: radix.to_vec(),
            digits: vec![0; radix.len()],
            rising: vec![true; radix.len()],
            done: false,
        }
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }
}

impl Iterator for MixedRadixGray {
    type Item = DigitChange;

    fn next(&mut self) -> Option<DigitChange> {
        if self.done {
            return None;
        }
        // Lowest digit that can still move in its current direction; digits
        // below it are pinned at an end and reverse.
        for i in 0..self.radix.len() {
            let d = self.digits[i];
            let movable = if self.rising[i] { d + 1 < self.radix[i] } else { d > 0 };
            if movable {
                let to = if self.rising[i] { d + 1 } else { d - 1 };
                self.digits[i] = to;
                for j in 0..i {
                    self.rising[j] = !self.rising[j];
                }
                return Some(DigitChange { digit: i, from: d, to });
            }
        }
        self.done = true;
        None
    }
}
