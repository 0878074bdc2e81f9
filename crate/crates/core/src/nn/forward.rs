use serde::{Deserialize, Serialize};

use super::model::Model;
use super::tensor::{Real, Tensor};
use crate::dsp::InputPlane;
use crate::error::{Error, Result};

/// Floor applied to the labelled probability before taking its log.
pub const PROB_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InferenceResult {
    pub probabilities: Vec<f64>,
    pub predicted_class: usize,
}

impl InferenceResult {
    pub fn from_probabilities(probabilities: Vec<f64>) -> Self {
        let predicted_class = argmax(&probabilities);
        Self {
            probabilities,
            predicted_class,
        }
    }
}

/// Index of the largest value; the lowest index wins ties.
pub fn argmax<T: PartialOrd + Copy>(xs: &[T]) -> usize {
    let mut best = 0;
    for (i, &x) in xs.iter().enumerate().skip(1) {
        if x > xs[best] {
            best = i;
        }
    }
    best
}

pub fn softmax<T: Real>(logits: &[T]) -> Vec<T> {
    let max = logits.iter().copied().fold(T::neg_infinity(), T::max);
    let exps: Vec<T> = logits.iter().map(|&z| (z - max).exp()).collect();
    let sum: T = exps.iter().copied().sum();
    exps.into_iter().map(|e| e / sum).collect()
}

/// Intermediate values kept for the backward pass.
struct Activations<T> {
    input: Vec<T>,
    pre_relu: Vec<T>,
    hidden: Vec<T>,
    probs: Vec<T>,
}

fn check_input<T: Real>(model: &Model<T>, input: &InputPlane) -> Result<()> {
    if input.n() != model.config.n {
        return Err(Error::invalid(format!(
            "input plane side {} does not match model input side {}",
            input.n(),
            model.config.n
        )));
    }
    Ok(())
}

fn run<T: Real>(model: &Model<T>, input: &InputPlane) -> Activations<T> {
    let cfg = model.config;
    let (n, k, s) = (cfg.n, cfg.kernel, cfg.stride);
    let side = cfg.conv_side();
    let x: Vec<T> = input.values().iter().map(|&v| T::from_f64(v)).collect();
    let w = model.conv_weights.data();
    let b = model.conv_bias.data();

    let mut pre_relu = Vec::with_capacity(cfg.flatten_len());
    for i in 0..side {
        for j in 0..side {
            for (f, &bias) in b.iter().enumerate() {
                let mut acc = bias;
                for u in 0..k {
                    let row = (i * s + u) * n + j * s;
                    let wrow = (f * k + u) * k;
                    for v in 0..k {
                        acc = acc + w[wrow + v] * x[row + v];
                    }
                }
                pre_relu.push(acc);
            }
        }
    }
    let hidden: Vec<T> = pre_relu.iter().map(|&z| z.max(T::zero())).collect();

    let c = cfg.num_classes;
    let dw = model.dense_weights.data();
    let mut logits = model.dense_bias.data().to_vec();
    for (kidx, &h) in hidden.iter().enumerate() {
        if h == T::zero() {
            continue;
        }
        let row = &dw[kidx * c..(kidx + 1) * c];
        for (l, &wk) in logits.iter_mut().zip(row) {
            *l = *l + h * wk;
        }
    }
    Activations {
        input: x,
        pre_relu,
        hidden,
        probs: softmax(&logits),
    }
}

/// Conv (valid, strided) -> ReLU -> flatten -> dense -> softmax.
pub fn forward<T: Real>(model: &Model<T>, input: &InputPlane) -> Result<InferenceResult> {
    check_input(model, input)?;
    let acts = run(model, input);
    Ok(InferenceResult::from_probabilities(
        acts.probs.iter().map(|p| p.as_f64()).collect(),
    ))
}

fn check_label<T: Real>(model: &Model<T>, label: usize) -> Result<()> {
    if label >= model.config.num_classes {
        return Err(Error::invalid(format!(
            "label {label} out of range for {} classes",
            model.config.num_classes
        )));
    }
    Ok(())
}

/// Cross-entropy `-ln p[label]`, with `p[label]` floored at [`PROB_FLOOR`].
pub fn loss<T: Real>(model: &Model<T>, input: &InputPlane, label: usize) -> Result<f64> {
    check_input(model, input)?;
    check_label(model, label)?;
    let acts = run(model, input);
    Ok(-acts.probs[label].as_f64().max(PROB_FLOOR).ln())
}

/// Gradients of the loss with respect to every parameter, shaped like the model.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients<T = f32> {
    pub loss: f64,
    pub conv_weights: Tensor<T>,
    pub conv_bias: Tensor<T>,
    pub dense_weights: Tensor<T>,
    pub dense_bias: Tensor<T>,
}

impl<T: Real> Gradients<T> {
    pub fn tensors(&self) -> [&Tensor<T>; 4] {
        [
            &self.conv_weights,
            &self.conv_bias,
            &self.dense_weights,
            &self.dense_bias,
        ]
    }
}

pub fn backward<T: Real>(
    model: &Model<T>,
    input: &InputPlane,
    label: usize,
) -> Result<Gradients<T>> {
    check_input(model, input)?;
    check_label(model, label)?;
    let cfg = model.config;
    let acts = run(model, input);
    let c = cfg.num_classes;

    // softmax + cross-entropy: dL/dz = p - onehot
    let mut d_logits = acts.probs.clone();
    d_logits[label] = d_logits[label] - T::one();

    let dw = model.dense_weights.data();
    let mut g_dense_w = Tensor::zeros(vec![cfg.flatten_len(), c]);
    let mut d_pre = vec![T::zero(); cfg.flatten_len()];
    {
        let gdw = g_dense_w.data_mut();
        for (kidx, &h) in acts.hidden.iter().enumerate() {
            let row = kidx * c;
            let mut back = T::zero();
            for cls in 0..c {
                gdw[row + cls] = h * d_logits[cls];
                back = back + dw[row + cls] * d_logits[cls];
            }
            if acts.pre_relu[kidx] > T::zero() {
                d_pre[kidx] = back;
            }
        }
    }

    let (n, k, s, f_count) = (cfg.n, cfg.kernel, cfg.stride, cfg.num_filters);
    let side = cfg.conv_side();
    let mut g_conv_w = Tensor::zeros(vec![f_count, k, k]);
    let mut g_conv_b = Tensor::zeros(vec![f_count]);
    {
        let gw = g_conv_w.data_mut();
        let gb = g_conv_b.data_mut();
        for i in 0..side {
            for j in 0..side {
                for f in 0..f_count {
                    let d = d_pre[(i * side + j) * f_count + f];
                    if d == T::zero() {
                        continue;
                    }
                    gb[f] = gb[f] + d;
                    for u in 0..k {
                        let row = (i * s + u) * n + j * s;
                        let wrow = (f * k + u) * k;
                        for v in 0..k {
                            gw[wrow + v] = gw[wrow + v] + d * acts.input[row + v];
                        }
                    }
                }
            }
        }
    }

    Ok(Gradients {
        loss: -acts.probs[label].as_f64().max(PROB_FLOOR).ln(),
        conv_weights: g_conv_w,
        conv_bias: g_conv_b,
        dense_weights: g_dense_w,
        dense_bias: Tensor::new(vec![c], d_logits)?,
    })
}
