//! Train the CNN on a synthetic four-class set and watch the loss fall.

use aquanode::device::DeviceProfile;
use aquanode::scenario::{run_training, synth_dataset, SyntheticDatasetSpec, TrainingConfig};

fn main() -> aquanode::Result<()> {
    let profile = DeviceProfile::default();
    let dataset = synth_dataset(&SyntheticDatasetSpec::four_class(
        profile.adc_rate_hz,
        25,
        1,
    ))?;
    println!("{} clips: {:?}", dataset.len(), dataset.class_names());

    let config = TrainingConfig {
        epochs: 20,
        ..TrainingConfig::default()
    };
    let run = run_training(&dataset, &config, &profile)?;
    for (epoch, loss) in run.summary.epoch_loss.iter().enumerate() {
        println!("epoch {:>2}  loss {loss:.5}", epoch + 1);
    }
    let s = &run.summary;
    println!(
        "accuracy: train {:.3} ({}), val {:.3} ({}), test {:.3} ({})",
        s.train_accuracy, s.train_size, s.val_accuracy, s.val_size, s.test_accuracy, s.test_size
    );
    println!("{} parameters", run.model.param_count());
    Ok(())
}
