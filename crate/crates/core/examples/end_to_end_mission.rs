//! Synthesize a dataset, train and quantize a classifier, then run an
//! online mission over a noisy backscatter link.

use aquanode::device::DeviceProfile;
use aquanode::link::ChannelModel;
use aquanode::quant::WeightsFile;
use aquanode::scenario::{
    convert, run_mission, run_training, synth_dataset, Report, ReportBody, Scenario,
    SyntheticDatasetSpec, TrainingConfig,
};

fn main() -> aquanode::Result<()> {
    let profile = DeviceProfile::default();
    let train_set = synth_dataset(&SyntheticDatasetSpec::four_class(
        profile.adc_rate_hz,
        25,
        1,
    ))?;
    let run = run_training(&train_set, &TrainingConfig::default(), &profile)?;
    println!(
        "offline accuracy: train {:.3}, val {:.3}, test {:.3}",
        run.summary.train_accuracy, run.summary.val_accuracy, run.summary.test_accuracy
    );

    let (quantized, conv) = convert(&run.model, &profile);
    println!(
        "int16 model needs {} of {} bytes",
        conv.footprint.total_bytes, conv.footprint.limit_bytes
    );

    // fresh clips the model has never seen
    let field = synth_dataset(&SyntheticDatasetSpec::four_class(
        profile.adc_rate_hz,
        4,
        99,
    ))?;
    let scenario = Scenario {
        profile,
        model: WeightsFile::Quantized(quantized),
        dataset: field,
        channel: ChannelModel {
            attenuation: 0.5,
            noise_sigma: 0.06,
            seed: 7,
        },
        trials: 16,
        seed: 3,
    };
    let report = run_mission(&scenario)?;
    print!(
        "{}",
        Report::new(Default::default(), ReportBody::Mission(report)).render_text()
    );
    Ok(())
}
