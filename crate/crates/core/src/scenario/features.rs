use crate::device::DeviceProfile;
use crate::dsp::{
    adc_sample, normalize, remove_dc, resample, stft, to_input_plane, AudioClip, InputPlane,
    WINDOW_SIZE, WINDOW_STEP,
};
use crate::error::Result;

/// Offline features: the clip at the device rate, peak-normalized, cut to
/// one window and turned into an `n x n` spectrogram plane.
pub fn offline_features(clip: &AudioClip, profile: &DeviceProfile, n: usize) -> Result<InputPlane> {
    let clip = normalize(&resample(clip, profile.adc_rate_hz)?).head(profile.window_len);
    to_input_plane(&stft(&clip, WINDOW_SIZE, WINDOW_STEP)?, n)
}

/// On-device features: the same clip pushed through the ADC model, with the
/// clamping offset removed before the spectrogram.
pub fn online_features(clip: &AudioClip, profile: &DeviceProfile, n: usize) -> Result<InputPlane> {
    let clip = normalize(&resample(clip, profile.adc_rate_hz)?);
    let trace = adc_sample(&clip, profile)?;
    let centered = normalize(&remove_dc(&trace)?);
    to_input_plane(&stft(&centered, WINDOW_SIZE, WINDOW_STEP)?, n)
}
