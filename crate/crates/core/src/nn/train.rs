use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::forward::{backward, forward, loss};
use super::model::Model;
use super::tensor::Real;
use crate::dsp::InputPlane;
use crate::error::{Error, Result};

pub type Sample = (InputPlane, usize);

#[derive(Debug, Clone, PartialEq)]
pub struct TrainOutcome<T = f32> {
    pub model: Model<T>,
    /// Mean loss over the whole dataset after each epoch.
    pub epoch_loss: Vec<f64>,
}

/// Plain per-sample SGD, reshuffling the dataset every epoch with a
/// generator seeded by `seed`.
pub fn train<T: Real>(
    model: &Model<T>,
    dataset: &[Sample],
    epochs: usize,
    learning_rate: f64,
    seed: u64,
) -> Result<Model<T>> {
    Ok(train_with_history(model, dataset, epochs, learning_rate, seed)?.model)
}

pub fn train_with_history<T: Real>(
    model: &Model<T>,
    dataset: &[Sample],
    epochs: usize,
    learning_rate: f64,
    seed: u64,
) -> Result<TrainOutcome<T>> {
    if dataset.is_empty() {
        return Err(Error::invalid("training set is empty"));
    }
    if !(learning_rate >= 0.0 && learning_rate.is_finite()) {
        return Err(Error::invalid(format!(
            "learning rate must be non-negative, got {learning_rate}"
        )));
    }
    let mut model = model.clone();
    let lr = T::from_f64(learning_rate);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..dataset.len()).collect();
    let mut epoch_loss = Vec::with_capacity(epochs);

    for _ in 0..epochs {
        order.shuffle(&mut rng);
        for &i in &order {
            let (x, label) = &dataset[i];
            let grads = backward(&model, x, *label)?;
            for (param, grad) in model.tensors_mut().into_iter().zip(grads.tensors()) {
                for (p, &g) in param.data_mut().iter_mut().zip(grad.data()) {
                    *p = *p - lr * g;
                }
            }
        }
        epoch_loss.push(mean_loss(&model, dataset)?);
    }
    Ok(TrainOutcome { model, epoch_loss })
}

pub fn mean_loss<T: Real>(model: &Model<T>, dataset: &[Sample]) -> Result<f64> {
    let mut total = 0.0;
    for (x, label) in dataset {
        total += loss(model, x, *label)?;
    }
    Ok(total / dataset.len().max(1) as f64)
}

/// Fraction of samples whose predicted class matches the label.
pub fn accuracy<T: Real>(model: &Model<T>, dataset: &[Sample]) -> Result<f64> {
    if dataset.is_empty() {
        return Ok(0.0);
    }
    let mut correct = 0;
    for (x, label) in dataset {
        if forward(model, x)?.predicted_class == *label {
            correct += 1;
        }
    }
    Ok(correct as f64 / dataset.len() as f64)
}
