//! Simulation of a battery-free underwater node that listens through a
//! piezoelectric transducer, classifies what it hears with a tiny CNN, and
//! reports the class over an FM0 backscatter uplink.
//!
//! - [`dsp`]: ADC model, DC removal, STFT and the network input plane
//! - [`nn`]: the CNN, training and the weights file format
//! - [`quant`]: int16 conversion and the memory footprint check
//! - [`device`]: power profile, energy ledgers, capacitor and scheduler
//! - [`link`]: framing, FM0, channel and receiver
//! - [`scenario`]: datasets, training runs, missions and reports

pub mod device;
pub mod dsp;
pub mod link;
pub mod nn;
pub mod quant;
pub mod scenario;

mod error;

pub use error::{Error, Result};
