//! Weights file layout (all integers little-endian):
//!
//! | offset | size | field                                   |
//! |--------|------|-----------------------------------------|
//! | 0      | 4    | magic `AQNN`                            |
//! | 4      | 2    | version, `1`                            |
//! | 6      | 2    | flags, bit 0 set for a quantized model  |
//! | 8      | 2    | input side `n`                          |
//! | 10     | 2    | number of classes                       |
//! | 12     | 2    | number of filters                       |
//! | 14     | ...  | tensors                                 |
//!
//! Tensors follow in declaration order: conv weights `(filters, 3, 3)`,
//! conv bias, dense weights `(flatten, classes)`, dense bias. A float file
//! stores each as float32 values. A quantized file stores each as a float32
//! scale followed by its int16 values.

use super::model::{Model, ModelConfig, TENSOR_NAMES};
use super::tensor::Tensor;
use crate::error::{Error, Result};

pub const MAGIC: [u8; 4] = *b"AQNN";
pub const VERSION: u16 = 1;
pub const FLAG_QUANTIZED: u16 = 0x0001;
pub const HEADER_LEN: usize = 14;

/// Size in bytes of a float32 weights file for `config`.
pub fn float_file_len(config: &ModelConfig) -> usize {
    HEADER_LEN + 4 * config.param_count()
}

/// Size in bytes of a quantized weights file for `config`.
pub fn quantized_file_len(config: &ModelConfig) -> usize {
    HEADER_LEN + 4 * TENSOR_NAMES.len() + 2 * config.param_count()
}

fn dim(field: &str, v: usize) -> Result<u16> {
    u16::try_from(v).map_err(|_| Error::format(field, format!("{v} does not fit in u16")))
}

pub(crate) fn write_header(out: &mut Vec<u8>, flags: u16, config: &ModelConfig) -> Result<()> {
    if config.kernel != ModelConfig::KERNEL || config.stride != ModelConfig::STRIDE {
        return Err(Error::format(
            "config",
            "only 3x3 kernels with stride 2 can be stored",
        ));
    }
    out.extend_from_slice(&MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&flags.to_le_bytes());
    out.extend_from_slice(&dim("n", config.n)?.to_le_bytes());
    out.extend_from_slice(&dim("num_classes", config.num_classes)?.to_le_bytes());
    out.extend_from_slice(&dim("num_filters", config.num_filters)?.to_le_bytes());
    Ok(())
}

pub(crate) struct ByteReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> ByteReader<'a> {
    pub(crate) fn new(bytes: &'a [u8]) -> Self {
        Self { bytes, pos: 0 }
    }

    pub(crate) fn take(&mut self, field: &str, len: usize) -> Result<&'a [u8]> {
        let end = self.pos + len;
        if end > self.bytes.len() {
            return Err(Error::format(
                field,
                format!(
                    "truncated: need {len} bytes at offset {}, file has {}",
                    self.pos,
                    self.bytes.len()
                ),
            ));
        }
        let out = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(out)
    }

    pub(crate) fn u16(&mut self, field: &str) -> Result<u16> {
        let b = self.take(field, 2)?;
        Ok(u16::from_le_bytes([b[0], b[1]]))
    }

    pub(crate) fn f32(&mut self, field: &str) -> Result<f32> {
        let b = self.take(field, 4)?;
        Ok(f32::from_le_bytes([b[0], b[1], b[2], b[3]]))
    }

    pub(crate) fn finish(&self) -> Result<()> {
        if self.pos != self.bytes.len() {
            return Err(Error::format(
                "payload",
                format!(
                    "{} trailing bytes after the last tensor",
                    self.bytes.len() - self.pos
                ),
            ));
        }
        Ok(())
    }
}

/// Reads and validates the header, returning `(flags, config)`.
pub(crate) fn read_header(r: &mut ByteReader<'_>) -> Result<(u16, ModelConfig)> {
    if r.take("magic", 4)? != MAGIC {
        return Err(Error::format("magic", "expected `AQNN`"));
    }
    let version = r.u16("version")?;
    if version != VERSION {
        return Err(Error::format(
            "version",
            format!("unsupported version {version}"),
        ));
    }
    let flags = r.u16("flags")?;
    if flags & !FLAG_QUANTIZED != 0 {
        return Err(Error::format(
            "flags",
            format!("unknown flag bits {flags:#06x}"),
        ));
    }
    let n = r.u16("n")? as usize;
    let num_classes = r.u16("num_classes")? as usize;
    let num_filters = r.u16("num_filters")? as usize;
    let config = ModelConfig {
        n,
        num_classes,
        num_filters,
        kernel: ModelConfig::KERNEL,
        stride: ModelConfig::STRIDE,
    };
    if n < ModelConfig::KERNEL {
        return Err(Error::format(
            "n",
            format!("input side {n} is smaller than the kernel"),
        ));
    }
    if num_classes < 2 {
        return Err(Error::format(
            "num_classes",
            format!("{num_classes} classes"),
        ));
    }
    if num_filters == 0 {
        return Err(Error::format("num_filters", "zero filters"));
    }
    Ok((flags, config))
}

pub fn save_model(model: &Model<f32>) -> Result<Vec<u8>> {
    let mut out = Vec::with_capacity(float_file_len(&model.config));
    write_header(&mut out, 0, &model.config)?;
    for t in model.tensors() {
        for v in t.data() {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    Ok(out)
}

pub(crate) fn read_float_tensors(
    r: &mut ByteReader<'_>,
    config: &ModelConfig,
) -> Result<Model<f32>> {
    let shapes = config.tensor_shapes();
    let mut tensors = Vec::with_capacity(4);
    for (shape, name) in shapes.into_iter().zip(TENSOR_NAMES) {
        let len: usize = shape.iter().product();
        let raw = r.take(name, 4 * len)?;
        let data: Vec<f32> = raw
            .chunks_exact(4)
            .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]))
            .collect();
        let t = Tensor::new(shape, data).map_err(|e| Error::format(name, e.to_string()))?;
        tensors.push(t);
    }
    let tensors: [Tensor<f32>; 4] = tensors.try_into().expect("four tensors");
    Model::from_tensors(*config, tensors)
}

/// Decodes a float32 weights file.
pub fn load_model(bytes: &[u8]) -> Result<Model<f32>> {
    let mut r = ByteReader::new(bytes);
    let (flags, config) = read_header(&mut r)?;
    if flags & FLAG_QUANTIZED != 0 {
        return Err(Error::format(
            "flags",
            "file holds a quantized model; load it with quant::load_quantized",
        ));
    }
    let model = read_float_tensors(&mut r, &config)?;
    r.finish()?;
    Ok(model)
}
