use crate::error::{Error, Result};

/// A mono waveform and its sample rate.
#[derive(Debug, Clone, PartialEq)]
pub struct AudioClip {
    samples: Vec<f64>,
    sample_rate_hz: f64,
}

impl AudioClip {
    pub fn new(samples: Vec<f64>, sample_rate_hz: f64) -> Result<Self> {
        if !(sample_rate_hz > 0.0 && sample_rate_hz.is_finite()) {
            return Err(Error::invalid(format!(
                "sample rate must be positive, got {sample_rate_hz}"
            )));
        }
        if let Some(i) = samples.iter().position(|s| !s.is_finite()) {
            return Err(Error::invalid(format!("sample {i} is not finite")));
        }
        Ok(Self {
            samples,
            sample_rate_hz,
        })
    }

    /// Samples `f(t)` at `len` instants spaced `1 / sample_rate_hz` apart.
    pub fn from_fn(len: usize, sample_rate_hz: f64, f: impl Fn(f64) -> f64) -> Result<Self> {
        let samples = (0..len).map(|i| f(i as f64 / sample_rate_hz)).collect();
        Self::new(samples, sample_rate_hz)
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration_s(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate_hz
    }

    pub fn peak(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, s| m.max(s.abs()))
    }

    /// The first `len` samples (or all of them if the clip is shorter).
    pub fn head(&self, len: usize) -> AudioClip {
        AudioClip {
            samples: self.samples[..len.min(self.samples.len())].to_vec(),
            sample_rate_hz: self.sample_rate_hz,
        }
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }
}

/// Linear-interpolation resampler.
///
/// Output sample `k` is the piecewise-linear reconstruction of the input
/// evaluated at `t = k / target_rate_hz`. Only instants inside the input span
/// are produced, so the output holds `floor((len - 1) * target / source) + 1`
/// samples and its duration differs from the input by less than one output
/// period.
pub fn resample(clip: &AudioClip, target_rate_hz: f64) -> Result<AudioClip> {
    if clip.is_empty() {
        return Err(Error::invalid("cannot resample an empty clip"));
    }
    if !(target_rate_hz > 0.0 && target_rate_hz.is_finite()) {
        return Err(Error::invalid(format!(
            "target rate must be positive, got {target_rate_hz}"
        )));
    }
    if target_rate_hz == clip.sample_rate_hz {
        return Ok(clip.clone());
    }

    let src = clip.samples();
    let ratio = clip.sample_rate_hz / target_rate_hz;
    let out_len = ((src.len() - 1) as f64 / ratio + 1e-9).floor() as usize + 1;
    let last = src.len() - 1;
    let samples = (0..out_len)
        .map(|k| {
            let pos = k as f64 * ratio;
            let i = (pos.floor() as usize).min(last);
            let frac = pos - i as f64;
            if i == last || frac <= 0.0 {
                src[i]
            } else {
                src[i] + (src[i + 1] - src[i]) * frac
            }
        })
        .collect();
    AudioClip::new(samples, target_rate_hz)
}

/// Scales the clip so its peak absolute amplitude is exactly 1.0.
/// An all-zero clip is returned unchanged.
pub fn normalize(clip: &AudioClip) -> AudioClip {
    let peak = clip.peak();
    if peak == 0.0 {
        return clip.clone();
    }
    let samples = clip
        .samples
        .iter()
        .map(|&s| {
            // exact ±1.0 at the peak even when s / peak rounds off
            if s.abs() == peak {
                s.signum()
            } else {
                s / peak
            }
        })
        .collect();
    AudioClip {
        samples,
        sample_rate_hz: clip.sample_rate_hz,
    }
}
