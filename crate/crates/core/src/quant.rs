//! Conversion of a trained model for the device: symmetric per-tensor int16
//! storage and a memory footprint check against the device budget.

use serde::{Deserialize, Serialize};

use crate::device::DeviceProfile;
use crate::dsp::InputPlane;
use crate::error::{Error, Result};
use crate::nn::format::{
    self, float_file_len, quantized_file_len, read_float_tensors, read_header, ByteReader,
    FLAG_QUANTIZED,
};
use crate::nn::{forward, InferenceResult, Model, ModelConfig, Tensor, TENSOR_NAMES};

pub const Q_MAX: i16 = i16::MAX;

/// int16 values with one scale: `value ~= q * scale`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantizedTensor {
    pub shape: Vec<usize>,
    pub values: Vec<i16>,
    pub scale: f32,
}

impl QuantizedTensor {
    /// Exact dequantized value of element `i`.
    pub fn dequantized(&self, i: usize) -> f64 {
        f64::from(self.values[i]) * f64::from(self.scale)
    }

    pub fn dequantize(&self) -> Tensor<f32> {
        let data = (0..self.values.len())
            .map(|i| self.dequantized(i) as f32)
            .collect();
        Tensor::new(self.shape.clone(), data).expect("shape preserved from source tensor")
    }
}

/// Symmetric linear quantization with `scale = max|w| / 32767`. A tensor of
/// zeros gets scale 1.0 and all-zero values.
pub fn quantize_tensor(t: &Tensor<f32>) -> QuantizedTensor {
    let max = f64::from(t.max_abs());
    if max == 0.0 {
        return QuantizedTensor {
            shape: t.shape().to_vec(),
            values: vec![0; t.len()],
            scale: 1.0,
        };
    }
    let scale = (max / f64::from(Q_MAX)) as f32;
    let s = f64::from(scale);
    let values = t
        .data()
        .iter()
        .map(|&w| {
            let w = f64::from(w);
            let mut q = (w / s).round().clamp(-f64::from(Q_MAX), f64::from(Q_MAX));
            // the division can round a half-way case to the wrong side
            if (w - q * s).abs() > s / 2.0 {
                q += (w - q * s).signum();
            }
            q as i16
        })
        .collect();
    QuantizedTensor {
        shape: t.shape().to_vec(),
        values,
        scale,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantizedModel {
    pub config: ModelConfig,
    /// Conv weights, conv bias, dense weights, dense bias.
    pub tensors: [QuantizedTensor; 4],
}

impl QuantizedModel {
    pub fn dequantize(&self) -> Model<f32> {
        let tensors = self.tensors.clone().map(|t| t.dequantize());
        Model::from_tensors(self.config, tensors).expect("shapes follow the config")
    }

    pub fn param_count(&self) -> usize {
        self.tensors.iter().map(|t| t.values.len()).sum()
    }
}

pub fn quantize(model: &Model<f32>) -> QuantizedModel {
    let [a, b, c, d] = model.tensors();
    QuantizedModel {
        config: model.config,
        tensors: [
            quantize_tensor(a),
            quantize_tensor(b),
            quantize_tensor(c),
            quantize_tensor(d),
        ],
    }
}

/// Inference with int16 storage: weights are dequantized and the network
/// runs in float32.
pub fn forward_quantized(qmodel: &QuantizedModel, input: &InputPlane) -> Result<InferenceResult> {
    forward(&qmodel.dequantize(), input)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FootprintReport {
    pub model_bytes: usize,
    pub working_buffer_bytes: usize,
    pub total_bytes: usize,
    pub limit_bytes: usize,
    pub fits: bool,
}

/// RAM for inference: every layer buffer is statically allocated in float32
/// (input plane, conv activations, logits), plus the ADC window held as one
/// 16-bit word per sample.
pub fn working_buffer_bytes(config: &ModelConfig, profile: &DeviceProfile) -> usize {
    4 * (config.n * config.n + config.flatten_len() + config.num_classes) + 2 * profile.window_len
}

fn report(model_bytes: usize, config: &ModelConfig, profile: &DeviceProfile) -> FootprintReport {
    let working_buffer_bytes = working_buffer_bytes(config, profile);
    let total_bytes = model_bytes + working_buffer_bytes;
    FootprintReport {
        model_bytes,
        working_buffer_bytes,
        total_bytes,
        limit_bytes: profile.memory_limit_bytes,
        fits: total_bytes <= profile.memory_limit_bytes,
    }
}

/// Model bytes are the size of the quantized weights file.
pub fn footprint(qmodel: &QuantizedModel, profile: &DeviceProfile) -> FootprintReport {
    report(quantized_file_len(&qmodel.config), &qmodel.config, profile)
}

/// Footprint of an unconverted float32 model.
pub fn footprint_float(model: &Model<f32>, profile: &DeviceProfile) -> FootprintReport {
    report(float_file_len(&model.config), &model.config, profile)
}

pub fn save_quantized(qmodel: &QuantizedModel) -> Result<Vec<u8>> {
    let mut out = Vec::with_capacity(quantized_file_len(&qmodel.config));
    format::write_header(&mut out, FLAG_QUANTIZED, &qmodel.config)?;
    for t in &qmodel.tensors {
        out.extend_from_slice(&t.scale.to_le_bytes());
        for v in &t.values {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    Ok(out)
}

fn read_quantized_tensors(
    r: &mut ByteReader<'_>,
    config: &ModelConfig,
) -> Result<[QuantizedTensor; 4]> {
    let mut tensors = Vec::with_capacity(4);
    for (shape, name) in config.tensor_shapes().into_iter().zip(TENSOR_NAMES) {
        let scale = r.f32(name)?;
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::format(
                name,
                format!("scale {scale} is not positive"),
            ));
        }
        let len: usize = shape.iter().product();
        let values = r
            .take(name, 2 * len)?
            .chunks_exact(2)
            .map(|c| i16::from_le_bytes([c[0], c[1]]))
            .collect();
        tensors.push(QuantizedTensor {
            shape,
            values,
            scale,
        });
    }
    Ok(tensors.try_into().expect("four tensors"))
}

pub fn load_quantized(bytes: &[u8]) -> Result<QuantizedModel> {
    match load_weights(bytes)? {
        WeightsFile::Quantized(q) => Ok(q),
        WeightsFile::Float(_) => Err(Error::format("flags", "file holds a float model")),
    }
}

/// Either kind of weights file.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightsFile {
    Float(Model<f32>),
    Quantized(QuantizedModel),
}

impl WeightsFile {
    pub fn config(&self) -> ModelConfig {
        match self {
            WeightsFile::Float(m) => m.config,
            WeightsFile::Quantized(q) => q.config,
        }
    }

    pub fn footprint(&self, profile: &DeviceProfile) -> FootprintReport {
        match self {
            WeightsFile::Float(m) => footprint_float(m, profile),
            WeightsFile::Quantized(q) => footprint(q, profile),
        }
    }

    pub fn forward(&self, input: &InputPlane) -> Result<InferenceResult> {
        match self {
            WeightsFile::Float(m) => forward(m, input),
            WeightsFile::Quantized(q) => forward_quantized(q, input),
        }
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        match self {
            WeightsFile::Float(m) => format::save_model(m),
            WeightsFile::Quantized(q) => save_quantized(q),
        }
    }
}

pub fn load_weights(bytes: &[u8]) -> Result<WeightsFile> {
    let mut r = ByteReader::new(bytes);
    let (flags, config) = read_header(&mut r)?;
    let file = if flags & FLAG_QUANTIZED != 0 {
        WeightsFile::Quantized(QuantizedModel {
            config,
            tensors: read_quantized_tensors(&mut r, &config)?,
        })
    } else {
        WeightsFile::Float(read_float_tensors(&mut r, &config)?)
    };
    r.finish()?;
    Ok(file)
}
