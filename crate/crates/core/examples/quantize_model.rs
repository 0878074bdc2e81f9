//! Quantize weights to int16, compare predictions, and see which
//! architectures fit the device memory.

use aquanode::device::DeviceProfile;
use aquanode::nn::{forward, Model, ModelConfig};
use aquanode::quant::{footprint, forward_quantized, load_quantized, quantize, save_quantized};
use aquanode::scenario::{dataset_features, synth_dataset, SyntheticDatasetSpec};

fn main() -> aquanode::Result<()> {
    let profile = DeviceProfile::default();
    let model = Model::<f32>::init(ModelConfig::new(16, 4)?, 5)?;
    let q = quantize(&model);
    let bytes = save_quantized(&q)?;
    assert_eq!(load_quantized(&bytes)?, q);
    println!("weights file: {} bytes", bytes.len());

    let data = synth_dataset(&SyntheticDatasetSpec::four_class(
        profile.adc_rate_hz,
        50,
        2,
    ))?;
    let samples = dataset_features(&data, &profile, 16)?;
    let mut agree = 0;
    for (x, _) in &samples {
        if forward(&model, x)?.predicted_class == forward_quantized(&q, x)?.predicted_class {
            agree += 1;
        }
    }
    println!("float and int16 agree on {agree}/{} inputs", samples.len());

    println!(
        "\n  n  classes  bytes  fits in {}",
        profile.memory_limit_bytes
    );
    for (n, c) in [(16, 4), (16, 8), (24, 4), (32, 4), (32, 8)] {
        let q = quantize(&Model::<f32>::zeros(ModelConfig::new(n, c)?)?);
        let f = footprint(&q, &profile);
        println!("{n:>3}  {c:>7}  {:>5}  {}", f.total_bytes, f.fits);
    }
    Ok(())
}
