use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::dataset::{Dataset, LabeledClip};
use crate::dsp::AudioClip;
use crate::error::{Error, Result};

/// Components summed to approximate a noise band.
const NOISE_BAND_COMPONENTS: usize = 16;

/// Signal generator for one class. Frequencies in Hz.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum SignalFamily {
    Tone {
        freq_hz: f64,
    },
    /// Linear sweep over the clip.
    Chirp {
        start_hz: f64,
        end_hz: f64,
    },
    NoiseBand {
        low_hz: f64,
        high_hz: f64,
    },
}

impl SignalFamily {
    fn frequencies(&self) -> Vec<f64> {
        match *self {
            SignalFamily::Tone { freq_hz } => vec![freq_hz],
            SignalFamily::Chirp { start_hz, end_hz } => vec![start_hz, end_hz],
            SignalFamily::NoiseBand { low_hz, high_hz } => vec![low_hz, high_hz],
        }
    }

    /// Short label used for class directory names.
    pub fn name(&self) -> String {
        match *self {
            SignalFamily::Tone { freq_hz } => format!("tone_{freq_hz}hz"),
            SignalFamily::Chirp { start_hz, end_hz } => format!("chirp_{start_hz}_{end_hz}hz"),
            SignalFamily::NoiseBand { low_hz, high_hz } => format!("noise_{low_hz}_{high_hz}hz"),
        }
    }

    fn render(&self, len: usize, fs: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
        let phase = rng.random_range(0.0..2.0 * PI);
        match *self {
            SignalFamily::Tone { freq_hz } => (0..len)
                .map(|i| (2.0 * PI * freq_hz * i as f64 / fs + phase).sin())
                .collect(),
            SignalFamily::Chirp { start_hz, end_hz } => {
                let duration = len as f64 / fs;
                let rate = (end_hz - start_hz) / duration;
                (0..len)
                    .map(|i| {
                        let t = i as f64 / fs;
                        (2.0 * PI * (start_hz * t + 0.5 * rate * t * t) + phase).sin()
                    })
                    .collect()
            }
            SignalFamily::NoiseBand { low_hz, high_hz } => {
                let comps: Vec<(f64, f64)> = (0..NOISE_BAND_COMPONENTS)
                    .map(|_| {
                        (
                            rng.random_range(low_hz..=high_hz),
                            rng.random_range(0.0..2.0 * PI),
                        )
                    })
                    .collect();
                let raw: Vec<f64> = (0..len)
                    .map(|i| {
                        let t = i as f64 / fs;
                        comps
                            .iter()
                            .map(|&(f, p)| (2.0 * PI * f * t + p).sin())
                            .sum()
                    })
                    .collect();
                let peak = raw.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                raw.into_iter().map(|v| v / peak).collect()
            }
        }
    }
}

/// Recipe for a labeled synthetic dataset. Each clip gets a random phase,
/// a random amplitude in `[0.5, 0.9]` and white noise of `noise_sigma`,
/// then is clamped to `[-1, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticDatasetSpec {
    pub classes: Vec<SignalFamily>,
    pub clips_per_class: usize,
    pub clip_len: usize,
    pub sample_rate_hz: f64,
    pub noise_sigma: f64,
    pub seed: u64,
}

impl SyntheticDatasetSpec {
    /// Four well separated classes at the given rate: two tones, a chirp and
    /// a noise band, all below a 330 Hz Nyquist limit.
    pub fn four_class(sample_rate_hz: f64, clips_per_class: usize, seed: u64) -> Self {
        Self {
            classes: vec![
                SignalFamily::Tone { freq_hz: 25.0 },
                SignalFamily::Tone { freq_hz: 80.0 },
                SignalFamily::Chirp {
                    start_hz: 40.0,
                    end_hz: 120.0,
                },
                SignalFamily::NoiseBand {
                    low_hz: 130.0,
                    high_hz: 160.0,
                },
            ],
            clips_per_class,
            clip_len: 512,
            sample_rate_hz,
            noise_sigma: 0.05,
            seed,
        }
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.classes.len() < 2 {
            return Err(Error::invalid("a dataset needs at least 2 classes"));
        }
        if self.clips_per_class == 0 || self.clip_len == 0 {
            return Err(Error::invalid(
                "clips per class and clip length must be positive",
            ));
        }
        if !(self.sample_rate_hz > 0.0 && self.sample_rate_hz.is_finite()) {
            return Err(Error::invalid(format!(
                "bad sample rate {}",
                self.sample_rate_hz
            )));
        }
        if !(self.noise_sigma >= 0.0 && self.noise_sigma.is_finite()) {
            return Err(Error::invalid(format!(
                "bad noise sigma {}",
                self.noise_sigma
            )));
        }
        let nyquist = self.sample_rate_hz / 2.0;
        for (i, class) in self.classes.iter().enumerate() {
            for f in class.frequencies() {
                if !(f > 0.0 && f < nyquist) {
                    return Err(Error::invalid(format!(
                        "class {i} ({}) uses {f} Hz, outside (0, {nyquist}) Hz",
                        class.name()
                    )));
                }
            }
            if let SignalFamily::NoiseBand { low_hz, high_hz } = *class {
                if low_hz >= high_hz {
                    return Err(Error::invalid(format!("class {i} has an empty noise band")));
                }
            }
            if self.classes[..i].contains(class) {
                return Err(Error::invalid(format!(
                    "class {i} duplicates an earlier class"
                )));
            }
        }
        Ok(())
    }
}

/// Clips are ordered by class, then by index within the class.
pub fn synth_dataset(spec: &SyntheticDatasetSpec) -> Result<Dataset> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let noise = Normal::new(0.0, spec.noise_sigma).expect("sigma validated");
    let mut clips = Vec::with_capacity(spec.num_classes() * spec.clips_per_class);
    for (label, class) in spec.classes.iter().enumerate() {
        for _ in 0..spec.clips_per_class {
            let amplitude = rng.random_range(0.5..=0.9);
            let samples = class
                .render(spec.clip_len, spec.sample_rate_hz, &mut rng)
                .into_iter()
                .map(|v| (amplitude * v + noise.sample(&mut rng)).clamp(-1.0, 1.0))
                .collect();
            clips.push(LabeledClip {
                clip: AudioClip::new(samples, spec.sample_rate_hz)?,
                label,
            });
        }
    }
    let class_names = spec
        .classes
        .iter()
        .enumerate()
        .map(|(i, c)| format!("{i:02}_{}", c.name()))
        .collect();
    Dataset::new(class_names, clips)
}
