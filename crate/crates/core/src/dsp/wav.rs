//! 16-bit PCM mono WAV ingestion and export.

use std::io::{Read, Seek, Write};
use std::path::Path;

use hound::{SampleFormat, WavReader, WavSpec, WavWriter};

use super::AudioClip;
use crate::error::{Error, Result};

fn wav_err(e: hound::Error) -> Error {
    match e {
        hound::Error::IoError(io) => Error::Io(io),
        other => Error::Wav(other.to_string()),
    }
}

/// Decodes a PCM 16-bit mono WAV stream. Samples are mapped to `[-1, 1)` by
/// dividing by 32768. Float, compressed and multi-channel files are rejected.
pub fn read_wav<R: Read>(reader: R) -> Result<AudioClip> {
    let reader = WavReader::new(reader).map_err(wav_err)?;
    let spec = reader.spec();
    if spec.sample_format != SampleFormat::Int {
        return Err(Error::Wav(
            "float samples are not supported, expected 16-bit PCM".into(),
        ));
    }
    if spec.bits_per_sample != 16 {
        return Err(Error::Wav(format!(
            "{}-bit samples are not supported, expected 16-bit PCM",
            spec.bits_per_sample
        )));
    }
    if spec.channels != 1 {
        return Err(Error::Wav(format!(
            "{} channels found, expected mono",
            spec.channels
        )));
    }
    let samples = reader
        .into_samples::<i16>()
        .map(|s| s.map(|v| f64::from(v) / 32768.0))
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(wav_err)?;
    AudioClip::new(samples, f64::from(spec.sample_rate))
}

pub fn read_wav_file(path: impl AsRef<Path>) -> Result<AudioClip> {
    let file = std::fs::File::open(path)?;
    read_wav(std::io::BufReader::new(file))
}

/// Encodes a clip as 16-bit PCM mono. Amplitudes are clamped to `[-1, 1]`
/// and the sample rate is rounded to the nearest integer.
pub fn write_wav<W: Write + Seek>(clip: &AudioClip, writer: W) -> Result<()> {
    let spec = WavSpec {
        channels: 1,
        sample_rate: clip.sample_rate_hz().round() as u32,
        bits_per_sample: 16,
        sample_format: SampleFormat::Int,
    };
    let mut w = WavWriter::new(writer, spec).map_err(wav_err)?;
    for &s in clip.samples() {
        let v = (s.clamp(-1.0, 1.0) * 32767.0).round() as i16;
        w.write_sample(v).map_err(wav_err)?;
    }
    w.finalize().map_err(wav_err)
}

pub fn write_wav_file(clip: &AudioClip, path: impl AsRef<Path>) -> Result<()> {
    let file = std::fs::File::create(path)?;
    write_wav(clip, std::io::BufWriter::new(file))
}
