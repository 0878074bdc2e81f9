mod common;

use aquanode::nn::{accuracy, mean_loss, train, train_with_history, Model, ModelConfig};
use common::banded_dataset;

#[test]
fn separable_two_class_set_is_learned() {
    let data = banded_dataset(16, 2, 40, 3);
    let init = Model::<f32>::init(ModelConfig::new(16, 2).unwrap(), 1).unwrap();
    let before = accuracy(&init, &data).unwrap();
    let out = train_with_history(&init, &data, 50, 0.01, 5).unwrap();
    let acc = accuracy(&out.model, &data).unwrap();
    assert!(acc >= 0.99, "accuracy {acc} (was {before})");
}

#[test]
fn zero_learning_rate_leaves_parameters_alone() {
    let data = banded_dataset(16, 4, 5, 1);
    let init = Model::<f32>::init(ModelConfig::new(16, 4).unwrap(), 2).unwrap();
    assert_eq!(train(&init, &data, 3, 0.0, 0).unwrap(), init);
}

#[test]
fn same_seed_same_model() {
    let data = banded_dataset(12, 3, 10, 8);
    let init = Model::<f32>::init(ModelConfig::new(12, 3).unwrap(), 4).unwrap();
    let a = train(&init, &data, 5, 0.05, 11).unwrap();
    let b = train(&init, &data, 5, 0.05, 11).unwrap();
    assert_eq!(a, b);
    let bits = |m: &Model<f32>| -> Vec<u32> {
        m.tensors()
            .iter()
            .flat_map(|t| t.data().iter().map(|v| v.to_bits()))
            .collect()
    };
    assert_eq!(bits(&a), bits(&b));
    assert_ne!(train(&init, &data, 5, 0.05, 12).unwrap(), a);
}

#[test]
fn small_steps_never_raise_the_loss() {
    let data = banded_dataset(16, 2, 40, 3);
    let init = Model::<f64>::init(ModelConfig::new(16, 2).unwrap(), 1).unwrap();
    let out = train_with_history(&init, &data, 30, 1e-3, 5).unwrap();
    let mut prev = mean_loss(&init, &data).unwrap();
    for (epoch, &l) in out.epoch_loss.iter().enumerate() {
        assert!(l <= prev, "epoch {epoch}: loss rose from {prev} to {l}");
        prev = l;
    }
    assert!(prev < mean_loss(&init, &data).unwrap());
}

#[test]
fn empty_dataset_is_rejected() {
    let init = Model::<f32>::zeros(ModelConfig::new(16, 2).unwrap()).unwrap();
    assert!(train(&init, &[], 1, 0.1, 0).is_err());
}
