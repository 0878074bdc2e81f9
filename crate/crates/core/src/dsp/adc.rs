use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::AudioClip;
use crate::device::DeviceProfile;
use crate::error::{Error, Result};

/// Unipolar ADC output for one sampling window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdcTrace {
    pub codes: Vec<u16>,
    pub bits: u32,
    pub sample_rate_hz: f64,
    pub vref: f64,
    pub dc_offset: f64,
    /// Volts per unit of input amplitude.
    pub gain: f64,
}

impl AdcTrace {
    pub fn full_scale(&self) -> u32 {
        (1u32 << self.bits) - 1
    }

    pub fn volts(&self) -> impl Iterator<Item = f64> + '_ {
        let fs = f64::from(self.full_scale());
        self.codes
            .iter()
            .map(move |&c| f64::from(c) / fs * self.vref)
    }
}

/// Models the clamping circuit and ADC: the clip is scaled by the front-end
/// gain, shifted by the DC offset, then quantized to `adc_bits` with
/// round-half-away-from-zero and saturating at both rails. At most
/// `window_len` samples are kept.
pub fn adc_sample(clip: &AudioClip, profile: &DeviceProfile) -> Result<AdcTrace> {
    if (clip.sample_rate_hz() - profile.adc_rate_hz).abs() > 1e-9 * profile.adc_rate_hz {
        return Err(Error::invalid(format!(
            "clip is at {} Hz but the ADC samples at {} Hz",
            clip.sample_rate_hz(),
            profile.adc_rate_hz
        )));
    }
    let full = f64::from(profile.adc_full_scale());
    let codes = clip
        .samples()
        .iter()
        .take(profile.window_len)
        .map(|&x| {
            let v = x * profile.adc_gain + profile.dc_offset;
            (v / profile.vref * full).round().clamp(0.0, full) as u16
        })
        .collect();
    Ok(AdcTrace {
        codes,
        bits: profile.adc_bits,
        sample_rate_hz: profile.adc_rate_hz,
        vref: profile.vref,
        dc_offset: profile.dc_offset,
        gain: profile.adc_gain,
    })
}

/// How the software path strips the clamping offset.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub enum DcRemoval {
    /// Subtract the window mean: a zero-phase notch at DC.
    #[default]
    WindowMean,
    /// First-order IIR high-pass from the bilinear transform of
    /// `s / (s + wc)`. With `k = tan(pi * fc / fs)`:
    /// `y[n] = (x[n] - x[n-1]) / (1 + k) + (1 - k) / (1 + k) * y[n-1]`,
    /// started in steady state for the first sample.
    HighPass { cutoff_hz: f64 },
}

/// Converts ADC codes back to input amplitude units with the offset removed.
pub fn remove_dc(trace: &AdcTrace) -> Result<AudioClip> {
    remove_dc_with(trace, DcRemoval::WindowMean)
}

pub fn remove_dc_with(trace: &AdcTrace, method: DcRemoval) -> Result<AudioClip> {
    if trace.codes.is_empty() {
        return Err(Error::invalid("empty ADC trace"));
    }
    let amplitude = AudioClip::new(
        trace.volts().map(|v| v / trace.gain).collect(),
        trace.sample_rate_hz,
    )?;
    strip_dc(&amplitude, method)
}

/// Applies `method` to a clip already in amplitude units.
pub fn strip_dc(clip: &AudioClip, method: DcRemoval) -> Result<AudioClip> {
    let x = clip.samples();
    let centered = match method {
        DcRemoval::WindowMean => {
            let mean = x.iter().sum::<f64>() / x.len().max(1) as f64;
            x.iter().map(|v| v - mean).collect()
        }
        DcRemoval::HighPass { cutoff_hz } => high_pass(x, cutoff_hz, clip.sample_rate_hz())?,
    };
    AudioClip::new(centered, clip.sample_rate_hz())
}

/// First-order high-pass, see [`DcRemoval::HighPass`].
pub fn high_pass(x: &[f64], cutoff_hz: f64, sample_rate_hz: f64) -> Result<Vec<f64>> {
    if !(cutoff_hz > 0.0 && cutoff_hz < sample_rate_hz / 2.0) {
        return Err(Error::invalid(format!(
            "cutoff {cutoff_hz} Hz must lie in (0, {}) Hz",
            sample_rate_hz / 2.0
        )));
    }
    let k = (PI * cutoff_hz / sample_rate_hz).tan();
    let b0 = 1.0 / (1.0 + k);
    let a1 = (1.0 - k) / (1.0 + k);
    let mut prev_x = x.first().copied().unwrap_or(0.0);
    let mut prev_y = 0.0;
    Ok(x.iter()
        .map(|&xn| {
            let y = b0 * (xn - prev_x) + a1 * prev_y;
            prev_x = xn;
            prev_y = y;
            y
        })
        .collect())
}
