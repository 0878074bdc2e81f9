use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::dataset::Dataset;
use super::features::offline_features;
use crate::device::DeviceProfile;
use crate::error::{Error, Result};
use crate::nn::{accuracy, train_with_history, Model, ModelConfig, Sample};

/// Smallest class size that still leaves one clip for validation and test.
pub const MIN_CLIPS_PER_CLASS: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingConfig {
    pub n: usize,
    pub epochs: usize,
    pub learning_rate: f64,
    pub init_seed: u64,
    pub split_seed: u64,
}

impl Default for TrainingConfig {
    fn default() -> Self {
        Self {
            n: 16,
            epochs: 30,
            learning_rate: 0.01,
            init_seed: 1,
            split_seed: 2,
        }
    }
}

/// Dataset indices of each split.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Split {
    pub train: Vec<usize>,
    pub val: Vec<usize>,
    pub test: Vec<usize>,
}

/// Shuffles each class with one seeded generator and cuts it 80/10/10,
/// rounding the validation and test shares to the nearest clip.
pub fn split_dataset(dataset: &Dataset, seed: u64) -> Result<Split> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut split = Split {
        train: Vec::new(),
        val: Vec::new(),
        test: Vec::new(),
    };
    for label in 0..dataset.num_classes() {
        let mut idx = dataset.indices_of(label);
        if idx.len() < MIN_CLIPS_PER_CLASS {
            return Err(Error::invalid(format!(
                "class `{}` has {} clips, need at least {MIN_CLIPS_PER_CLASS}",
                dataset.class_names()[label],
                idx.len()
            )));
        }
        idx.shuffle(&mut rng);
        let tenth = (idx.len() as f64 * 0.1).round() as usize;
        split.test.extend_from_slice(&idx[..tenth]);
        split.val.extend_from_slice(&idx[tenth..2 * tenth]);
        split.train.extend_from_slice(&idx[2 * tenth..]);
    }
    Ok(split)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingSummary {
    pub train_size: usize,
    pub val_size: usize,
    pub test_size: usize,
    pub train_accuracy: f64,
    pub val_accuracy: f64,
    pub test_accuracy: f64,
    pub epoch_loss: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainingRun {
    pub model: Model<f32>,
    pub split: Split,
    pub summary: TrainingSummary,
}

/// Offline features for every clip, in dataset order.
pub fn dataset_features(
    dataset: &Dataset,
    profile: &DeviceProfile,
    n: usize,
) -> Result<Vec<Sample>> {
    dataset
        .clips()
        .par_iter()
        .map(|c| Ok((offline_features(&c.clip, profile, n)?, c.label)))
        .collect()
}

pub fn run_training(
    dataset: &Dataset,
    config: &TrainingConfig,
    profile: &DeviceProfile,
) -> Result<TrainingRun> {
    let model_config = ModelConfig::new(config.n, dataset.num_classes())?;
    let split = split_dataset(dataset, config.split_seed)?;
    let features = dataset_features(dataset, profile, config.n)?;
    let pick =
        |idx: &[usize]| -> Vec<Sample> { idx.iter().map(|&i| features[i].clone()).collect() };
    let (train_set, val_set, test_set) = (pick(&split.train), pick(&split.val), pick(&split.test));

    let init = Model::<f32>::init(model_config, config.init_seed)?;
    let outcome = train_with_history(
        &init,
        &train_set,
        config.epochs,
        config.learning_rate,
        config.init_seed,
    )?;
    let summary = TrainingSummary {
        train_size: train_set.len(),
        val_size: val_set.len(),
        test_size: test_set.len(),
        train_accuracy: accuracy(&outcome.model, &train_set)?,
        val_accuracy: accuracy(&outcome.model, &val_set)?,
        test_accuracy: accuracy(&outcome.model, &test_set)?,
        epoch_loss: outcome.epoch_loss,
    };
    Ok(TrainingRun {
        model: outcome.model,
        split,
        summary,
    })
}
