use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::tensor::{Real, Tensor};
use crate::error::{Error, Result};

/// Architecture of the classifier: one `kernel x kernel` convolution with
/// `num_filters` filters and stride `stride` over an `n x n` plane, ReLU,
/// flatten, a dense layer to `num_classes` logits and softmax.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelConfig {
    pub n: usize,
    pub num_classes: usize,
    pub num_filters: usize,
    pub kernel: usize,
    pub stride: usize,
}

impl ModelConfig {
    pub const KERNEL: usize = 3;
    pub const STRIDE: usize = 2;
    pub const FILTERS: usize = 8;

    pub fn new(n: usize, num_classes: usize) -> Result<Self> {
        let cfg = Self {
            n,
            num_classes,
            num_filters: Self::FILTERS,
            kernel: Self::KERNEL,
            stride: Self::STRIDE,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_classes < 2 {
            return Err(Error::invalid(format!(
                "need at least 2 classes, got {}",
                self.num_classes
            )));
        }
        if self.num_filters == 0 || self.kernel == 0 || self.stride == 0 {
            return Err(Error::invalid(
                "filters, kernel and stride must be positive",
            ));
        }
        if self.n < self.kernel {
            return Err(Error::invalid(format!(
                "input side {} is smaller than the {}x{} kernel",
                self.n, self.kernel, self.kernel
            )));
        }
        Ok(())
    }

    /// Side of the convolution output map (valid padding).
    pub fn conv_side(&self) -> usize {
        (self.n - self.kernel) / self.stride + 1
    }

    pub fn flatten_len(&self) -> usize {
        self.conv_side() * self.conv_side() * self.num_filters
    }

    pub fn param_count(&self) -> usize {
        let k2 = self.kernel * self.kernel;
        self.num_filters * (k2 + 1) + self.flatten_len() * self.num_classes + self.num_classes
    }

    /// Shapes of the parameter tensors in declaration order.
    pub fn tensor_shapes(&self) -> [Vec<usize>; 4] {
        [
            vec![self.num_filters, self.kernel, self.kernel],
            vec![self.num_filters],
            vec![self.flatten_len(), self.num_classes],
            vec![self.num_classes],
        ]
    }
}

pub const TENSOR_NAMES: [&str; 4] = ["conv_weights", "conv_bias", "dense_weights", "dense_bias"];

/// Parameters of the classifier. Flattening is height-major, then width,
/// then filter: activation `(i, j, f)` sits at `(i * side + j) * filters + f`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Model<T = f32> {
    pub config: ModelConfig,
    pub conv_weights: Tensor<T>,
    pub conv_bias: Tensor<T>,
    pub dense_weights: Tensor<T>,
    pub dense_bias: Tensor<T>,
}

impl<T: Real> Model<T> {
    pub fn zeros(config: ModelConfig) -> Result<Self> {
        config.validate()?;
        let [cw, cb, dw, db] = config.tensor_shapes();
        Ok(Self {
            config,
            conv_weights: Tensor::zeros(cw),
            conv_bias: Tensor::zeros(cb),
            dense_weights: Tensor::zeros(dw),
            dense_bias: Tensor::zeros(db),
        })
    }

    /// Glorot-uniform weights, zero biases.
    pub fn init(config: ModelConfig, seed: u64) -> Result<Self> {
        let mut model = Self::zeros(config)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k2 = config.kernel * config.kernel;
        let conv_limit = (6.0 / (k2 + k2 * config.num_filters) as f64).sqrt();
        let dense_limit = (6.0 / (config.flatten_len() + config.num_classes) as f64).sqrt();
        for w in model.conv_weights.data_mut() {
            *w = T::from_f64(rng.random_range(-conv_limit..conv_limit));
        }
        for w in model.dense_weights.data_mut() {
            *w = T::from_f64(rng.random_range(-dense_limit..dense_limit));
        }
        Ok(model)
    }

    /// Builds a model from the four tensors, checking them against `config`.
    pub fn from_tensors(config: ModelConfig, tensors: [Tensor<T>; 4]) -> Result<Self> {
        config.validate()?;
        for ((t, shape), name) in tensors.iter().zip(config.tensor_shapes()).zip(TENSOR_NAMES) {
            if t.shape() != shape.as_slice() {
                return Err(Error::format(
                    name,
                    format!("shape {:?} does not match expected {shape:?}", t.shape()),
                ));
            }
        }
        let [conv_weights, conv_bias, dense_weights, dense_bias] = tensors;
        Ok(Self {
            config,
            conv_weights,
            conv_bias,
            dense_weights,
            dense_bias,
        })
    }

    pub fn tensors(&self) -> [&Tensor<T>; 4] {
        [
            &self.conv_weights,
            &self.conv_bias,
            &self.dense_weights,
            &self.dense_bias,
        ]
    }

    pub fn tensors_mut(&mut self) -> [&mut Tensor<T>; 4] {
        [
            &mut self.conv_weights,
            &mut self.conv_bias,
            &mut self.dense_weights,
            &mut self.dense_bias,
        ]
    }

    pub fn param_count(&self) -> usize {
        self.tensors().iter().map(|t| t.len()).sum()
    }

    pub fn cast<U: Real>(&self) -> Model<U> {
        Model {
            config: self.config,
            conv_weights: self.conv_weights.cast(),
            conv_bias: self.conv_bias.cast(),
            dense_weights: self.dense_weights.cast(),
            dense_bias: self.dense_bias.cast(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_algebra_for_n16() {
        let cfg = ModelConfig::new(16, 4).unwrap();
        assert_eq!(cfg.conv_side(), 7);
        assert_eq!(cfg.flatten_len(), 392);
        assert_eq!(cfg.param_count(), 8 * 10 + 392 * 4 + 4);
        assert_eq!(cfg.param_count(), 1652);
        let m = Model::<f32>::init(cfg, 1).unwrap();
        assert_eq!(m.param_count(), 1652);
    }

    #[test]
    fn invalid_configs() {
        assert!(ModelConfig::new(2, 4).is_err());
        assert!(ModelConfig::new(16, 1).is_err());
        assert_eq!(ModelConfig::new(3, 2).unwrap().conv_side(), 1);
    }

    #[test]
    fn init_is_seeded_and_bounded() {
        let cfg = ModelConfig::new(16, 4).unwrap();
        let a = Model::<f32>::init(cfg, 7).unwrap();
        assert_eq!(a, Model::<f32>::init(cfg, 7).unwrap());
        assert_ne!(a, Model::<f32>::init(cfg, 8).unwrap());
        let limit = (6.0f32 / 81.0).sqrt();
        assert!(a.conv_weights.max_abs() <= limit);
        assert!(a.conv_bias.data().iter().all(|&b| b == 0.0));
    }
}
