use std::f64::consts::PI;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::AudioClip;
use crate::error::{Error, Result};

/// STFT magnitudes, `num_frames` rows of `window_size / 2 + 1` bins.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrogram {
    data: Vec<f64>,
    num_frames: usize,
    num_bins: usize,
    pub window_size: usize,
    pub window_step: usize,
}

impl Spectrogram {
    pub fn from_frames(
        frames: Vec<Vec<f64>>,
        window_size: usize,
        window_step: usize,
    ) -> Result<Self> {
        let num_frames = frames.len();
        let num_bins = frames.first().map_or(0, Vec::len);
        if frames.iter().any(|f| f.len() != num_bins) {
            return Err(Error::invalid("ragged spectrogram frames"));
        }
        if frames
            .iter()
            .flatten()
            .any(|&m| !(m >= 0.0 && m.is_finite()))
        {
            return Err(Error::invalid(
                "spectrogram magnitudes must be finite and non-negative",
            ));
        }
        Ok(Self {
            data: frames.into_iter().flatten().collect(),
            num_frames,
            num_bins,
            window_size,
            window_step,
        })
    }

    pub fn num_frames(&self) -> usize {
        self.num_frames
    }

    pub fn num_bins(&self) -> usize {
        self.num_bins
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.num_frames, self.num_bins)
    }

    pub fn get(&self, frame: usize, bin: usize) -> f64 {
        self.data[frame * self.num_bins + bin]
    }

    pub fn frame(&self, i: usize) -> &[f64] {
        &self.data[i * self.num_bins..(i + 1) * self.num_bins]
    }

    pub fn frames(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks(self.num_bins.max(1))
    }

    pub fn max(&self) -> f64 {
        self.data.iter().copied().fold(0.0, f64::max)
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }
}

/// Periodic Hann window, `w[n] = 0.5 - 0.5 cos(2 pi n / N)`.
pub fn hann(size: usize) -> Vec<f64> {
    (0..size)
        .map(|n| 0.5 - 0.5 * (2.0 * PI * n as f64 / size as f64).cos())
        .collect()
}

/// Hann-windowed STFT with an unnormalized forward DFT; each bin holds `|X[k]|`
/// for `k = 0 ..= window_size / 2`.
///
/// With this normalization, per frame
/// `|X[0]|^2 + 2 * sum_{0<k<N/2} |X[k]|^2 + |X[N/2]|^2 = N * sum (w[n] x[n])^2`
/// for even `N`.
pub fn stft(clip: &AudioClip, window_size: usize, window_step: usize) -> Result<Spectrogram> {
    if window_size == 0 || window_step == 0 {
        return Err(Error::invalid("window size and step must be at least 1"));
    }
    let x = clip.samples();
    if x.len() < window_size {
        return Err(Error::invalid(format!(
            "clip has {} samples, shorter than the {window_size}-sample window",
            x.len()
        )));
    }
    let num_frames = (x.len() - window_size) / window_step + 1;
    let num_bins = window_size / 2 + 1;
    let window = hann(window_size);
    let fft = FftPlanner::<f64>::new().plan_fft_forward(window_size);

    let mut buf = vec![Complex::new(0.0, 0.0); window_size];
    let mut data = Vec::with_capacity(num_frames * num_bins);
    for f in 0..num_frames {
        let start = f * window_step;
        for (b, (&s, &w)) in buf
            .iter_mut()
            .zip(x[start..start + window_size].iter().zip(&window))
        {
            *b = Complex::new(s * w, 0.0);
        }
        fft.process(&mut buf);
        data.extend(buf[..num_bins].iter().map(|c| c.norm()));
    }
    Ok(Spectrogram {
        data,
        num_frames,
        num_bins,
        window_size,
        window_step,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_for_device_window() {
        let clip = AudioClip::new(vec![0.1; 512], 330.0).unwrap();
        let s = stft(&clip, 64, 32).unwrap();
        assert_eq!(s.shape(), (15, 33));
    }

    #[test]
    fn zeros_give_zeros() {
        let clip = AudioClip::new(vec![0.0; 200], 330.0).unwrap();
        let s = stft(&clip, 64, 32).unwrap();
        assert_eq!(s.max(), 0.0);
    }

    #[test]
    fn short_clip_is_rejected() {
        let clip = AudioClip::new(vec![0.0; 63], 330.0).unwrap();
        assert!(matches!(stft(&clip, 64, 32), Err(Error::InvalidInput(_))));
        assert!(stft(&clip, 32, 0).is_err());
    }
}
