use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ordered sequence of bits.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BitStream(Vec<bool>);

impl BitStream {
    pub fn new(bits: Vec<bool>) -> Self {
        Self(bits)
    }

    /// From `0`/`1` values; anything else is rejected.
    pub fn from_binary(bits: &[u8]) -> Result<Self> {
        bits.iter()
            .enumerate()
            .map(|(i, &b)| match b {
                0 => Ok(false),
                1 => Ok(true),
                other => Err(Error::invalid(format!("bit {i} has value {other}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }

    /// The low `width` bits of `value`, most significant first.
    pub fn from_value(value: u64, width: usize) -> Self {
        assert!(width <= 64, "width {width} exceeds 64 bits");
        Self((0..width).rev().map(|i| (value >> i) & 1 == 1).collect())
    }

    pub fn from_bytes(bytes: &[u8]) -> Self {
        Self(
            bytes
                .iter()
                .flat_map(|&b| (0..8).rev().map(move |i| (b >> i) & 1 == 1))
                .collect(),
        )
    }

    /// Interprets the stream as an unsigned integer, most significant bit first.
    pub fn to_value(&self) -> Option<u64> {
        if self.0.len() > 64 {
            return None;
        }
        Some(
            self.0
                .iter()
                .fold(0u64, |acc, &b| (acc << 1) | u64::from(b)),
        )
    }

    /// Packs bits MSB-first; a partial last byte is padded with zeros.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.0
            .chunks(8)
            .map(|chunk| {
                chunk
                    .iter()
                    .enumerate()
                    .fold(0u8, |acc, (i, &b)| acc | (u8::from(b) << (7 - i)))
            })
            .collect()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn extend(&mut self, other: &BitStream) {
        self.0.extend_from_slice(&other.0);
    }

    pub fn slice(&self, start: usize, end: usize) -> BitStream {
        BitStream(self.0[start..end].to_vec())
    }
}

impl FromIterator<bool> for BitStream {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

/// Fraction of positions that differ; missing positions count as errors.
pub fn bit_error_rate(sent: &BitStream, received: &BitStream) -> f64 {
    if sent.is_empty() {
        return 0.0;
    }
    let differing = sent
        .bits()
        .iter()
        .zip(received.bits())
        .filter(|(a, b)| a != b)
        .count();
    let missing = sent.len().saturating_sub(received.len());
    (differing + missing) as f64 / sent.len() as f64
}
