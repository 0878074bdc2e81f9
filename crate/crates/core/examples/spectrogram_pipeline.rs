//! A tone through the ADC model, DC removal, STFT and the network input plane.

use std::f64::consts::PI;

use aquanode::device::DeviceProfile;
use aquanode::dsp::{
    adc_sample, normalize, remove_dc, stft, to_input_plane, AudioClip, WINDOW_SIZE, WINDOW_STEP,
};

fn main() -> aquanode::Result<()> {
    let profile = DeviceProfile::default();
    let fs = profile.adc_rate_hz;
    let tone_hz = 41.25;
    let clip = AudioClip::from_fn(profile.window_len, fs, |t| {
        0.8 * (2.0 * PI * tone_hz * t).sin()
    })?;

    let trace = adc_sample(&clip, &profile)?;
    let (lo, hi) = (
        trace.codes.iter().min().unwrap(),
        trace.codes.iter().max().unwrap(),
    );
    println!(
        "{} codes, range {lo}..={hi} of {}",
        trace.codes.len(),
        trace.full_scale()
    );

    let centered = normalize(&remove_dc(&trace)?);
    let spec = stft(&centered, WINDOW_SIZE, WINDOW_STEP)?;
    let (frames, bins) = spec.shape();
    println!("spectrogram {frames} x {bins}");
    let peak_bin = (0..bins)
        .max_by(|&a, &b| spec.get(0, a).total_cmp(&spec.get(0, b)))
        .unwrap();
    println!(
        "strongest bin {peak_bin} = {:.2} Hz (tone at {tone_hz} Hz)",
        peak_bin as f64 * fs / WINDOW_SIZE as f64
    );

    let plane = to_input_plane(&spec, 16)?;
    println!("16 x 16 input plane, rows are time:");
    for r in 0..plane.n() {
        let row: String = (0..plane.n())
            .map(|c| match plane.get(r, c) {
                v if v > 0.6 => '#',
                v if v > 0.3 => '+',
                v if v > 0.1 => '.',
                _ => ' ',
            })
            .collect();
        println!("  |{row}|");
    }
    Ok(())
}
