use thiserror::Error;

use super::fm0::{fm0_decode, fm0_encode, Level};
use super::frame::{crc8, CRC_BITS, PREAMBLE, PREAMBLE_BITS};
use super::{BitStream, ChannelModel};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinkError {
    #[error("no preamble found")]
    NoPreamble,
    #[error("FM0 boundary violation at bit {position}")]
    Fm0Violation { position: usize },
    #[error("CRC mismatch: frame carries {received:#04x}, payload hashes to {computed:#04x}")]
    CrcMismatch { received: u8, computed: u8 },
}

/// Chip errors tolerated inside the 32-chip preamble.
pub const PREAMBLE_MAX_CHIP_ERRORS: usize = 2;

/// Per-chip hard decision. With a known channel the threshold sits between
/// its two noiseless levels; otherwise halfway between the extreme samples.
pub fn slice_chips(samples: &[f64], channel: Option<&ChannelModel>) -> Vec<Level> {
    let threshold = match channel {
        Some(ch) => ch.threshold(),
        None => {
            let (lo, hi) = samples
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &s| {
                    (lo.min(s), hi.max(s))
                });
            0.5 * (lo + hi)
        }
    };
    samples
        .iter()
        .map(|&s| {
            if s > threshold {
                Level::High
            } else {
                Level::Low
            }
        })
        .collect()
}

fn preamble_template() -> Vec<Level> {
    fm0_encode(
        &BitStream::from_value(u64::from(PREAMBLE), PREAMBLE_BITS),
        Level::Low,
    )
    .chips
}

/// Earliest offset with the fewest preamble chip errors, and whether the
/// match was against the inverted template.
fn find_preamble(chips: &[Level], template: &[Level]) -> Option<(usize, bool)> {
    let min_len = 2 * (PREAMBLE_BITS + 1 + CRC_BITS);
    if chips.len() < min_len {
        return None;
    }
    let mut best: Option<(usize, bool, usize)> = None;
    for offset in 0..=chips.len() - min_len {
        let window = &chips[offset..offset + template.len()];
        let matches = window.iter().zip(template).filter(|(a, b)| a == b).count();
        // FM0 carries no polarity, so the complement is the same preamble
        // sent from the other idle level
        let inverted = matches < template.len() - matches;
        let errors = matches.min(template.len() - matches);
        if errors <= PREAMBLE_MAX_CHIP_ERRORS && best.is_none_or(|(_, _, e)| errors < e) {
            best = Some((offset, inverted, errors));
            if errors == 0 {
                break;
            }
        }
    }
    best.map(|(offset, inverted, _)| (offset, inverted))
}

/// Locates the frame by preamble correlation, FM0-decodes everything after
/// it to the end of the capture, and checks the CRC. Returns the payload.
///
/// Violation positions count bits from the start of the frame.
pub fn receive(samples: &[f64], channel: Option<&ChannelModel>) -> Result<BitStream, LinkError> {
    let chips = slice_chips(samples, channel);
    let template = preamble_template();
    let (start, inverted) = find_preamble(&chips, &template).ok_or(LinkError::NoPreamble)?;
    let body_start = start + template.len();
    let body_len = (chips.len() - body_start) / 2 * 2;
    let last = *template.last().expect("non-empty preamble");
    let level = if inverted { last.inverted() } else { last };
    let bits =
        fm0_decode(&chips[body_start..body_start + body_len], Some(level)).map_err(
            |e| match e {
                LinkError::Fm0Violation { position } => LinkError::Fm0Violation {
                    position: position + PREAMBLE_BITS,
                },
                other => other,
            },
        )?;

    let payload_end = bits.len() - CRC_BITS;
    let payload = bits.slice(0, payload_end);
    let received = bits
        .slice(payload_end, bits.len())
        .to_value()
        .expect("8 bits") as u8;
    let computed = crc8(&payload.to_bytes());
    if received != computed {
        return Err(LinkError::CrcMismatch { received, computed });
    }
    Ok(payload)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::device::DeviceProfile;
    use crate::link::{frame, transmit};

    fn send(value: u64, width: usize, ch: &ChannelModel) -> Vec<f64> {
        let pkt = frame(&BitStream::from_value(value, width)).unwrap();
        transmit(&pkt, ch, &DeviceProfile::default())
            .unwrap()
            .samples
    }

    #[test]
    fn clean_loopback() {
        let ch = ChannelModel::default();
        let samples = send(0x5A3, 12, &ch);
        assert_eq!(
            receive(&samples, Some(&ch)).unwrap().to_value(),
            Some(0x5A3)
        );
        assert_eq!(receive(&samples, None).unwrap().to_value(), Some(0x5A3));
    }

    #[test]
    fn preamble_found_after_idle() {
        let ch = ChannelModel {
            attenuation: 0.3,
            ..ChannelModel::default()
        };
        let mut samples = vec![ch.amplitude(Level::Low); 21];
        samples.extend(send(0x0F0, 12, &ch));
        assert_eq!(
            receive(&samples, Some(&ch)).unwrap().to_value(),
            Some(0x0F0)
        );
    }

    #[test]
    fn chip_pair_flip_is_a_crc_error() {
        let ch = ChannelModel::default();
        let mut samples = send(0x123, 12, &ch);
        // chips 2i+1 and 2i+2 straddle the boundary between payload bits i and i+1
        let i = PREAMBLE_BITS + 4;
        for c in [2 * i + 1, 2 * i + 2] {
            samples[c] = if samples[c] > 0.6 { 0.2 } else { 1.0 };
        }
        assert!(matches!(
            receive(&samples, Some(&ch)),
            Err(LinkError::CrcMismatch { .. })
        ));
    }

    #[test]
    fn single_chip_flip_is_an_fm0_violation() {
        let ch = ChannelModel::default();
        let mut samples = send(0x123, 12, &ch);
        let c = 2 * (PREAMBLE_BITS + 3);
        samples[c] = if samples[c] > 0.6 { 0.2 } else { 1.0 };
        assert!(matches!(
            receive(&samples, Some(&ch)),
            Err(LinkError::Fm0Violation { .. })
        ));
    }

    #[test]
    fn silence_has_no_preamble() {
        assert_eq!(receive(&[0.2; 100], None), Err(LinkError::NoPreamble));
        assert_eq!(receive(&[], None), Err(LinkError::NoPreamble));
    }
}
