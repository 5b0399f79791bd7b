use std::fmt;

use rand::Rng;

use crate::error::SimError;

/// The last `M` price moves, oldest first, packed into the low bits of a
/// `u32`. The most recent move is the least significant bit; rise = 1,
/// drop = 0. `(1, 1, 0)` is "rise, rise, drop" and packs to `0b110`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HistoryPattern {
    code: u32,
    len: u32,
}

impl HistoryPattern {
    pub fn from_code(code: u32, len: u32) -> Self {
        assert!((1..=32).contains(&len), "pattern length {len} out of range");
        assert!(
            len == 32 || code < (1u32 << len),
            "code {code:#b} does not fit in {len} bits"
        );
        Self { code, len }
    }

    /// Builds a pattern from symbols, oldest first. Any non-zero symbol is a rise.
    pub fn from_bits(bits: &[u8]) -> Self {
        let code = bits
            .iter()
            .fold(0u32, |acc, &b| (acc << 1) | u32::from(b != 0));
        Self::from_code(code, bits.len() as u32)
    }

    pub fn random<R: Rng + ?Sized>(len: u32, rng: &mut R) -> Self {
        Self::from_code(rng.gen_range(0..Self::space(len)), len)
    }

    /// Number of distinct patterns of length `len`.
    pub fn space(len: u32) -> u32 {
        1u32 << len
    }

    pub fn code(&self) -> u32 {
        self.code
    }

    pub fn len(&self) -> u32 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn bits(&self) -> Vec<u8> {
        (0..self.len)
            .rev()
            .map(|i| ((self.code >> i) & 1) as u8)
            .collect()
    }

    /// Drops the oldest move and appends `bit` as the newest.
    pub fn push(&mut self, bit: u8) {
        let mask = if self.len == 32 {
            u32::MAX
        } else {
            (1u32 << self.len) - 1
        };
        self.code = ((self.code << 1) | u32::from(bit != 0)) & mask;
    }
}

impl fmt::Display for HistoryPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.bits() {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

/// Encodes one price move: 1 for a rise, 0 for a drop. An unchanged price
/// counts as a rise.
pub fn encode_change(p_prev: f64, p_curr: f64) -> Result<u8, SimError> {
    for p in [p_prev, p_curr] {
        if !(p > 0.0 && p.is_finite()) {
            return Err(SimError::NonPositivePrice(p));
        }
    }
    Ok(u8::from(p_curr >= p_prev))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encode_examples() {
        assert_eq!(encode_change(100.0, 101.0).unwrap(), 1);
        assert_eq!(encode_change(100.0, 99.0).unwrap(), 0);
        assert_eq!(encode_change(100.0, 100.0).unwrap(), 1);
    }

    #[test]
    fn encode_rejects_non_positive() {
        assert!(matches!(
            encode_change(0.0, 1.0),
            Err(SimError::NonPositivePrice(_))
        ));
        assert!(encode_change(1.0, -2.0).is_err());
        assert!(encode_change(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn bits_are_oldest_first() {
        let p = HistoryPattern::from_bits(&[1, 1, 0]);
        assert_eq!(p.code(), 0b110);
        assert_eq!(p.bits(), vec![1, 1, 0]);
        assert_eq!(p.to_string(), "110");
    }

    #[test]
    fn push_shifts_out_oldest() {
        let mut p = HistoryPattern::from_bits(&[1, 1, 0]);
        p.push(1);
        assert_eq!(p.bits(), vec![1, 0, 1]);
        p.push(0);
        p.push(0);
        assert_eq!(p.bits(), vec![1, 0, 0]);
        assert_eq!(p.len(), 3);
    }
}
