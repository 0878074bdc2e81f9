use serde::{Deserialize, Serialize};

use super::BitStream;
use crate::error::{Error, Result};

pub const PREAMBLE: u16 = 0xAA55;
pub const PREAMBLE_BITS: usize = 16;
pub const CRC_BITS: usize = 8;

/// CRC-8/ATM: polynomial 0x07, init 0x00, no reflection, no final xor.
pub fn crc8(bytes: &[u8]) -> u8 {
    let mut crc = 0u8;
    for &byte in bytes {
        crc ^= byte;
        for _ in 0..8 {
            crc = if crc & 0x80 != 0 {
                (crc << 1) ^ 0x07
            } else {
                crc << 1
            };
        }
    }
    crc
}

/// Uplink frame: 16-bit preamble, payload, CRC-8 of the payload.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Packet {
    pub preamble: u16,
    pub payload: BitStream,
    pub checksum: u8,
}

impl Packet {
    /// All frame bits in transmission order.
    pub fn to_bits(&self) -> BitStream {
        let mut bits = BitStream::from_value(u64::from(self.preamble), PREAMBLE_BITS);
        bits.extend(&self.payload);
        bits.extend(&BitStream::from_value(u64::from(self.checksum), CRC_BITS));
        bits
    }

    pub fn verify(&self) -> bool {
        self.preamble == PREAMBLE && crc8(&self.payload.to_bytes()) == self.checksum
    }
}

/// Frames a payload. The checksum covers the payload packed MSB-first with
/// a zero-padded final byte.
pub fn frame(payload: &BitStream) -> Result<Packet> {
    if payload.is_empty() {
        return Err(Error::invalid("cannot frame an empty payload"));
    }
    Ok(Packet {
        preamble: PREAMBLE,
        payload: payload.clone(),
        checksum: crc8(&payload.to_bytes()),
    })
}
