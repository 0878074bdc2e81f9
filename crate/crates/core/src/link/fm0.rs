//! FM0 (bi-phase space) line code over the two transducer impedance states.
//!
//! The level inverts at every bit boundary. A `0` adds a second inversion in
//! the middle of the bit; a `1` holds its level for the whole bit.

use serde::{Deserialize, Serialize};

use super::{BitStream, LinkError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Level {
    /// Non-reflective impedance state.
    Low,
    /// Reflective impedance state.
    High,
}

impl Level {
    pub fn inverted(self) -> Level {
        match self {
            Level::Low => Level::High,
            Level::High => Level::Low,
        }
    }
}

/// Two chips per bit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineSignal {
    pub chips: Vec<Level>,
    /// Level held before the first chip.
    pub initial_level: Level,
}

impl LineSignal {
    pub fn bit_count(&self) -> usize {
        self.chips.len() / 2
    }

    /// Duration at `bps` data bits per second (chip rate `2 * bps`).
    pub fn duration_s(&self, bps: f64) -> f64 {
        self.bit_count() as f64 / bps
    }
}

pub fn fm0_encode(bits: &BitStream, initial_level: Level) -> LineSignal {
    let mut chips = Vec::with_capacity(2 * bits.len());
    let mut level = initial_level;
    for &bit in bits.bits() {
        let first = level.inverted();
        let second = if bit { first } else { first.inverted() };
        chips.push(first);
        chips.push(second);
        level = second;
    }
    LineSignal {
        chips,
        initial_level,
    }
}

/// Bits recovered from chips, with every bit whose leading boundary did not
/// invert listed in `violations`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fm0Decoded {
    pub bits: BitStream,
    pub violations: Vec<usize>,
}

/// Decodes chip pairs: equal chips give `1`, differing chips give `0`.
/// When `initial_level` is `None` the first boundary is not checked.
pub fn fm0_decode_lenient(chips: &[Level], initial_level: Option<Level>) -> Fm0Decoded {
    let mut bits = Vec::with_capacity(chips.len() / 2);
    let mut violations = Vec::new();
    let mut prev = initial_level;
    for (i, pair) in chips.chunks_exact(2).enumerate() {
        if prev == Some(pair[0]) {
            violations.push(i);
        }
        bits.push(pair[0] == pair[1]);
        prev = Some(pair[1]);
    }
    Fm0Decoded {
        bits: BitStream::new(bits),
        violations,
    }
}

/// Strict decoding: an odd chip count or any boundary without an inversion
/// is an error carrying the offending bit position.
pub fn fm0_decode(chips: &[Level], initial_level: Option<Level>) -> Result<BitStream, LinkError> {
    if chips.len() < 2 || !chips.len().is_multiple_of(2) {
        return Err(LinkError::Fm0Violation {
            position: chips.len() / 2,
        });
    }
    let decoded = fm0_decode_lenient(chips, initial_level);
    match decoded.violations.first() {
        Some(&position) => Err(LinkError::Fm0Violation { position }),
        None => Ok(decoded.bits),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Level::{High as H, Low as L};

    #[test]
    fn encoding_examples() {
        let ones = BitStream::from_binary(&[1, 1]).unwrap();
        assert_eq!(fm0_encode(&ones, L).chips, vec![H, H, L, L]);
        let zero = BitStream::from_binary(&[0]).unwrap();
        assert_eq!(fm0_encode(&zero, L).chips, vec![H, L]);
        assert_eq!(fm0_encode(&zero, H).chips, vec![L, H]);
    }

    #[test]
    fn twelve_bits_take_twelve_ms() {
        let sig = fm0_encode(&BitStream::from_value(0xFFF, 12), L);
        assert_eq!(sig.chips.len(), 24);
        assert_eq!(sig.duration_s(1000.0), 0.012);
    }

    #[test]
    fn decode_flags_boundary_violation() {
        // second bit starts on the same level the first ended on
        let chips = [H, H, H, L];
        assert_eq!(
            fm0_decode(&chips, Some(L)),
            Err(LinkError::Fm0Violation { position: 1 })
        );
        let lenient = fm0_decode_lenient(&chips, Some(L));
        assert_eq!(lenient.violations, vec![1]);
        assert_eq!(lenient.bits, BitStream::from_binary(&[1, 0]).unwrap());
        assert!(fm0_decode(&[H, H, L], None).is_err());
    }
}
