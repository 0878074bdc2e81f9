use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Constants describing the target node.
///
/// Power and timing defaults are the measured values of the reference
/// MSP430 prototype at 1.9 V. Memory, ADC front-end and storage defaults are
/// configuration, not measurements.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviceProfile {
    pub adc_rate_hz: f64,
    pub adc_bits: u32,
    pub window_len: usize,
    pub supply_v: f64,
    pub p_sampling_uw: f64,
    pub p_inference_uw: f64,
    pub p_backscatter_uw: f64,
    pub t_sampling_s: f64,
    pub t_inference_s: f64,
    pub uplink_bps: f64,
    /// Bits in one transmitted inference result.
    pub result_bits: usize,
    pub memory_limit_bytes: usize,
    pub vref: f64,
    pub dc_offset: f64,
    /// Volts per unit of input amplitude at the ADC pin.
    pub adc_gain: f64,
    pub harvest_efficiency: f64,
    pub capacitance_f: f64,
    pub cap_rated_v: f64,
    pub cap_min_v: f64,
    /// Extra stored energy required before a stage starts, as a fraction of its cost.
    pub reserve_fraction: f64,
}

impl Default for DeviceProfile {
    fn default() -> Self {
        Self {
            adc_rate_hz: 330.0,
            adc_bits: 12,
            window_len: 512,
            supply_v: 1.9,
            p_sampling_uw: 932.0,
            p_inference_uw: 1300.0,
            p_backscatter_uw: 902.0,
            t_sampling_s: 1.6,
            t_inference_s: 3.0,
            uplink_bps: 1000.0,
            result_bits: 12,
            memory_limit_bytes: 8 * 1024,
            vref: 1.9,
            dc_offset: 0.95,
            adc_gain: 0.95,
            harvest_efficiency: 1.0,
            capacitance_f: 0.01,
            cap_rated_v: 2.5,
            cap_min_v: 0.0,
            reserve_fraction: 0.05,
        }
    }
}

macro_rules! profile_keys {
    ($m:ident) => {
        $m!(
            adc_rate_hz,
            adc_bits,
            window_len,
            supply_v,
            p_sampling_uw,
            p_inference_uw,
            p_backscatter_uw,
            t_sampling_s,
            t_inference_s,
            uplink_bps,
            result_bits,
            memory_limit_bytes,
            vref,
            dc_offset,
            adc_gain,
            harvest_efficiency,
            capacitance_f,
            cap_rated_v,
            cap_min_v,
            reserve_fraction
        )
    };
}

impl DeviceProfile {
    /// Largest ADC code, `2^bits - 1`.
    pub fn adc_full_scale(&self) -> u32 {
        (1u32 << self.adc_bits) - 1
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("adc_rate_hz", self.adc_rate_hz),
            ("supply_v", self.supply_v),
            ("uplink_bps", self.uplink_bps),
            ("vref", self.vref),
            ("adc_gain", self.adc_gain),
            ("capacitance_f", self.capacitance_f),
            ("cap_rated_v", self.cap_rated_v),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::format(name, format!("must be positive, got {v}")));
            }
        }
        let non_negative = [
            ("p_sampling_uw", self.p_sampling_uw),
            ("p_inference_uw", self.p_inference_uw),
            ("p_backscatter_uw", self.p_backscatter_uw),
            ("t_sampling_s", self.t_sampling_s),
            ("t_inference_s", self.t_inference_s),
        ];
        for (name, v) in non_negative {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::format(
                    name,
                    format!("must be non-negative, got {v}"),
                ));
            }
        }
        if !(1..=16).contains(&self.adc_bits) {
            return Err(Error::format("adc_bits", "must be in 1..=16"));
        }
        if self.window_len == 0 {
            return Err(Error::format("window_len", "must be at least 1"));
        }
        if self.result_bits == 0 {
            return Err(Error::format("result_bits", "must be at least 1"));
        }
        if !(self.harvest_efficiency > 0.0 && self.harvest_efficiency <= 1.0) {
            return Err(Error::format("harvest_efficiency", "must be in (0, 1]"));
        }
        if !(self.dc_offset.is_finite() && self.dc_offset >= 0.0) {
            return Err(Error::format(
                "dc_offset",
                "must be finite and non-negative",
            ));
        }
        if !(self.cap_min_v >= 0.0 && self.cap_min_v < self.cap_rated_v) {
            return Err(Error::format("cap_min_v", "must be in [0, cap_rated_v)"));
        }
        if !(self.reserve_fraction >= 0.0 && self.reserve_fraction.is_finite()) {
            return Err(Error::format("reserve_fraction", "must be non-negative"));
        }
        Ok(())
    }

    /// Parses the flat `key = value` format. Blank lines and `#` comments are
    /// ignored; keys not present keep their default value.
    pub fn parse(text: &str) -> Result<Self> {
        let mut p = DeviceProfile::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::format(format!("line {}", lineno + 1), "expected `key = value`")
            })?;
            let (key, value) = (key.trim(), value.trim());

            macro_rules! assign {
                ($($field:ident),*) => {
                    match key {
                        $(stringify!($field) => {
                            p.$field = value.parse().map_err(|_| {
                                Error::format(key, format!("cannot parse `{value}`"))
                            })?;
                        })*
                        _ => return Err(Error::format(key, "unknown key")),
                    }
                };
            }
            profile_keys!(assign);
        }
        p.validate()?;
        Ok(p)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Writes every key in declaration order.
    pub fn to_config_string(&self) -> String {
        let mut out = String::new();
        macro_rules! emit {
            ($($field:ident),*) => {
                $( let _ = writeln!(out, "{} = {}", stringify!($field), self.$field); )*
            };
        }
        profile_keys!(emit);
        out
    }
}
