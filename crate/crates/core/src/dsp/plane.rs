use serde::{Deserialize, Serialize};

use super::Spectrogram;
use crate::error::{Error, Result};

/// Square model input, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputPlane {
    values: Vec<f64>,
    n: usize,
}

impl InputPlane {
    pub fn new(values: Vec<f64>, n: usize) -> Result<Self> {
        if values.len() != n * n {
            return Err(Error::invalid(format!(
                "plane of side {n} needs {} values, got {}",
                n * n,
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("plane values must be finite"));
        }
        Ok(Self { values, n })
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            values: vec![0.0; n * n],
            n,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.n + col]
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            values: self.values.iter().map(|v| v * factor).collect(),
            n: self.n,
        }
    }
}

/// Resizes the (frames x bins) grid to `n x n` by bilinear interpolation with
/// corner-aligned sampling (output row `i` reads source row
/// `i * (frames - 1) / (n - 1)`), then divides by the spectrogram's global
/// maximum so values land in `[0, 1]`. Rows follow time, columns frequency.
pub fn to_input_plane(spec: &Spectrogram, n: usize) -> Result<InputPlane> {
    if spec.is_empty() {
        return Err(Error::invalid("empty spectrogram"));
    }
    if n < 2 {
        return Err(Error::invalid(format!(
            "plane side must be at least 2, got {n}"
        )));
    }
    let (rows, cols) = spec.shape();
    let max = spec.max();
    let axis = |i: usize, len: usize| -> (usize, usize, f64) {
        if len == 1 {
            return (0, 0, 0.0);
        }
        let pos = i as f64 * (len - 1) as f64 / (n - 1) as f64;
        let lo = (pos.floor() as usize).min(len - 2);
        (lo, lo + 1, pos - lo as f64)
    };

    let mut values = Vec::with_capacity(n * n);
    for i in 0..n {
        let (r0, r1, fr) = axis(i, rows);
        for j in 0..n {
            let (c0, c1, fc) = axis(j, cols);
            let top = lerp(spec.get(r0, c0), spec.get(r0, c1), fc);
            let bottom = lerp(spec.get(r1, c0), spec.get(r1, c1), fc);
            let v = lerp(top, bottom, fr);
            values.push(if max > 0.0 { v / max } else { 0.0 });
        }
    }
    InputPlane::new(values, n)
}

fn lerp(a: f64, b: f64, t: f64) -> f64 {
    a + (b - a) * t
}
