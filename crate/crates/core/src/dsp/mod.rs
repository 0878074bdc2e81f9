//! Signal path from raw audio to the classifier's square input plane.

mod adc;
mod audio;
mod plane;
mod stft;
pub mod wav;

pub use adc::{adc_sample, high_pass, remove_dc, remove_dc_with, strip_dc, AdcTrace, DcRemoval};
pub use audio::{normalize, resample, AudioClip};
pub use plane::{to_input_plane, InputPlane};
pub use stft::{hann, stft, Spectrogram};

/// STFT window used by the node.
pub const WINDOW_SIZE: usize = 64;
pub const WINDOW_STEP: usize = 32;
