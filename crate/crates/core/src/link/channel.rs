use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::fm0::{fm0_encode, Level, LineSignal};
use super::{BitStream, Packet};
use crate::device::{stage_energy, DeviceProfile};
use crate::error::{Error, Result};

/// Amplitude of the non-reflective state relative to the reflective one.
pub const NON_REFLECTIVE_RATIO: f64 = 0.2;

/// Flat attenuation plus white Gaussian noise, one sample per chip.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelModel {
    pub attenuation: f64,
    pub noise_sigma: f64,
    pub seed: u64,
}

impl Default for ChannelModel {
    fn default() -> Self {
        Self {
            attenuation: 1.0,
            noise_sigma: 0.0,
            seed: 0,
        }
    }
}

impl ChannelModel {
    pub fn validate(&self) -> Result<()> {
        if !(self.attenuation > 0.0 && self.attenuation <= 1.0) {
            return Err(Error::invalid(format!(
                "attenuation must be in (0, 1], got {}",
                self.attenuation
            )));
        }
        if !(self.noise_sigma >= 0.0 && self.noise_sigma.is_finite()) {
            return Err(Error::invalid(format!(
                "noise sigma must be finite and non-negative, got {}",
                self.noise_sigma
            )));
        }
        Ok(())
    }

    pub fn amplitude(&self, level: Level) -> f64 {
        match level {
            Level::High => self.attenuation,
            Level::Low => NON_REFLECTIVE_RATIO * self.attenuation,
        }
    }

    /// Decision threshold halfway between the two noiseless levels.
    pub fn threshold(&self) -> f64 {
        0.5 * (1.0 + NON_REFLECTIVE_RATIO) * self.attenuation
    }

    /// Received samples for `chips`, noise drawn from a generator seeded with `seed`.
    pub fn apply(&self, chips: &[Level]) -> Vec<f64> {
        let clean = chips.iter().map(|&c| self.amplitude(c));
        if self.noise_sigma == 0.0 {
            return clean.collect();
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let noise = Normal::new(0.0, self.noise_sigma).expect("sigma validated");
        clean.map(|a| a + noise.sample(&mut rng)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkReport {
    pub bits: usize,
    pub duration_s: f64,
    pub energy_mj: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Transmission {
    pub signal: LineSignal,
    pub samples: Vec<f64>,
    pub report: LinkReport,
}

/// Backscatters raw bits, starting from the non-reflective idle state.
pub fn transmit_bits(
    bits: &BitStream,
    channel: &ChannelModel,
    profile: &DeviceProfile,
) -> Result<Transmission> {
    if bits.is_empty() {
        return Err(Error::invalid("nothing to transmit"));
    }
    channel.validate()?;
    let signal = fm0_encode(bits, Level::Low);
    let samples = channel.apply(&signal.chips);
    let duration_s = bits.len() as f64 / profile.uplink_bps;
    let energy_mj = stage_energy(profile.p_backscatter_uw, duration_s)?;
    Ok(Transmission {
        signal,
        samples,
        report: LinkReport {
            bits: bits.len(),
            duration_s,
            energy_mj,
        },
    })
}

pub fn transmit(
    packet: &Packet,
    channel: &ChannelModel,
    profile: &DeviceProfile,
) -> Result<Transmission> {
    transmit_bits(&packet.to_bits(), channel, profile)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::link::frame;

    #[test]
    fn unframed_result_energy() {
        let p = DeviceProfile::default();
        let tx =
            transmit_bits(&BitStream::from_value(3, 12), &ChannelModel::default(), &p).unwrap();
        assert_eq!(tx.report.duration_s, 0.012);
        assert!((tx.report.energy_mj - 0.0108).abs() < 1e-4);
        assert_eq!(tx.report.energy_mj, stage_energy(902.0, 0.012).unwrap());
    }

    #[test]
    fn framed_result_is_36_bits() {
        let p = DeviceProfile::default();
        let pkt = frame(&BitStream::from_value(3, 12)).unwrap();
        let tx = transmit(&pkt, &ChannelModel::default(), &p).unwrap();
        assert_eq!(tx.report.bits, 36);
        assert_eq!(tx.report.duration_s, 0.036);
    }

    #[test]
    fn noiseless_levels() {
        let tx = transmit_bits(
            &BitStream::from_value(0b1011, 4),
            &ChannelModel::default(),
            &DeviceProfile::default(),
        )
        .unwrap();
        assert!(tx.samples.iter().all(|&s| s == 1.0 || s == 0.2));
    }

    #[test]
    fn rejects_bad_channel() {
        let ch = ChannelModel {
            attenuation: 0.0,
            ..ChannelModel::default()
        };
        assert!(
            transmit_bits(&BitStream::from_value(1, 1), &ch, &DeviceProfile::default()).is_err()
        );
    }
}
