//! Tiny CNN: one strided 3x3 convolution with 8 filters, ReLU, a dense
//! softmax layer, exact backpropagation and SGD training.

pub mod format;
mod forward;
mod model;
mod tensor;
mod train;

pub use format::{load_model, save_model};
pub use forward::{
    argmax, backward, forward, loss, softmax, Gradients, InferenceResult, PROB_FLOOR,
};
pub use model::{Model, ModelConfig, TENSOR_NAMES};
pub use tensor::{Real, Tensor};
pub use train::{accuracy, mean_loss, train, train_with_history, Sample, TrainOutcome};
