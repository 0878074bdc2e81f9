use super::report::{ConvertReport, TensorQuantization};
use crate::device::DeviceProfile;
use crate::nn::format::{float_file_len, quantized_file_len};
use crate::nn::{Model, TENSOR_NAMES};
use crate::quant::{footprint, footprint_float, quantize, QuantizedModel};

/// Quantizes a float model and reports per-tensor error and both footprints.
pub fn convert(model: &Model<f32>, profile: &DeviceProfile) -> (QuantizedModel, ConvertReport) {
    let q = quantize(model);
    let tensors = TENSOR_NAMES
        .iter()
        .zip(model.tensors())
        .zip(&q.tensors)
        .map(|((name, t), qt)| TensorQuantization {
            name: name.to_string(),
            len: t.len(),
            scale: qt.scale,
            max_abs_error: t
                .data()
                .iter()
                .enumerate()
                .map(|(i, &w)| (f64::from(w) - qt.dequantized(i)).abs())
                .fold(0.0, f64::max),
        })
        .collect();
    let report = ConvertReport {
        model: model.config,
        param_count: model.param_count(),
        float_bytes: float_file_len(&model.config),
        quantized_bytes: quantized_file_len(&model.config),
        tensors,
        float_footprint: footprint_float(model, profile),
        footprint: footprint(&q, profile),
    };
    (q, report)
}
