//! Read a 16-bit mono WAV file (or write a demo one) and classify-ready
//! features from it at the device sample rate.
//!
//! ```text
//! cargo run --example wav_ingest -- path/to/clip.wav
//! ```

use std::f64::consts::PI;

use aquanode::device::DeviceProfile;
use aquanode::dsp::{resample, wav, AudioClip};
use aquanode::scenario::online_features;

fn main() -> aquanode::Result<()> {
    let path = match std::env::args().nth(1) {
        Some(p) => std::path::PathBuf::from(p),
        None => {
            let p = std::env::temp_dir().join("aquanode_demo.wav");
            let clip = AudioClip::from_fn(8000, 4000.0, |t| 0.5 * (2.0 * PI * 100.0 * t).sin())?;
            wav::write_wav_file(&clip, &p)?;
            println!("wrote demo clip to {}", p.display());
            p
        }
    };
    let clip = wav::read_wav_file(&path)?;
    println!(
        "{} samples at {} Hz ({:.2} s), peak {:.3}",
        clip.len(),
        clip.sample_rate_hz(),
        clip.duration_s(),
        clip.peak()
    );
    let profile = DeviceProfile::default();
    let at_device = resample(&clip, profile.adc_rate_hz)?;
    println!(
        "{} samples at the {} Hz ADC rate",
        at_device.len(),
        profile.adc_rate_hz
    );
    let plane = online_features(&clip, &profile, 16)?;
    let energy: f64 = plane.values().iter().sum();
    println!("16 x 16 plane, total {energy:.3}");
    Ok(())
}
