//! Backscatter uplink: framing, FM0 line coding, channel and receiver.

mod bits;
mod channel;
mod fm0;
mod frame;
mod receiver;

pub use bits::{bit_error_rate, BitStream};
pub use channel::{
    transmit, transmit_bits, ChannelModel, LinkReport, Transmission, NON_REFLECTIVE_RATIO,
};
pub use fm0::{fm0_decode, fm0_decode_lenient, fm0_encode, Fm0Decoded, Level, LineSignal};
pub use frame::{crc8, frame, Packet, CRC_BITS, PREAMBLE, PREAMBLE_BITS};
pub use receiver::{receive, slice_chips, LinkError, PREAMBLE_MAX_CHIP_ERRORS};
