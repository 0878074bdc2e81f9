//! Structured run reports.
//!
//! Every subcommand emits one JSON document:
//!
//! ```text
//! {
//!   "generated_at": "<RFC 3339 UTC>",
//!   "inputs": { "<flag>": "<value>", ... },
//!   "command": "synth" | "train" | "convert" | "mission" | "tradeoff",
//!   "result": { ... }
//! }
//! ```
//!
//! `generated_at` is the only field that depends on the wall clock; set
//! `SOURCE_DATE_EPOCH` to pin it. Object fields keep declaration order.

use std::collections::BTreeMap;

use chrono::{DateTime, SecondsFormat, Utc};
use serde::{Deserialize, Serialize};

use super::mission::RunReport;
use super::synth::SyntheticDatasetSpec;
use super::tradeoff::TradeoffReport;
use super::training::{TrainingConfig, TrainingSummary};
use crate::device::EnergyLedger;
use crate::error::{Error, Result};
use crate::nn::ModelConfig;
use crate::quant::FootprintReport;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthReport {
    pub spec: SyntheticDatasetSpec,
    pub class_names: Vec<String>,
    pub class_counts: Vec<usize>,
    pub total_clips: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainReport {
    pub config: TrainingConfig,
    pub class_names: Vec<String>,
    pub model: ModelConfig,
    pub param_count: usize,
    pub model_bytes: usize,
    pub summary: TrainingSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TensorQuantization {
    pub name: String,
    pub len: usize,
    pub scale: f32,
    pub max_abs_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvertReport {
    pub model: ModelConfig,
    pub param_count: usize,
    pub float_bytes: usize,
    pub quantized_bytes: usize,
    pub tensors: Vec<TensorQuantization>,
    pub float_footprint: FootprintReport,
    pub footprint: FootprintReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", content = "result", rename_all = "snake_case")]
pub enum ReportBody {
    Synth(SynthReport),
    Train(TrainReport),
    Convert(ConvertReport),
    Mission(RunReport),
    Tradeoff(TradeoffReport),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub generated_at: String,
    pub inputs: BTreeMap<String, String>,
    #[serde(flatten)]
    pub body: ReportBody,
}

/// Current UTC time, or `SOURCE_DATE_EPOCH` when set.
pub fn timestamp() -> String {
    let pinned = std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.trim().parse::<i64>().ok())
        .and_then(|secs| DateTime::<Utc>::from_timestamp(secs, 0));
    pinned
        .unwrap_or_else(Utc::now)
        .to_rfc3339_opts(SecondsFormat::Secs, true)
}

impl Report {
    pub fn new(inputs: BTreeMap<String, String>, body: ReportBody) -> Self {
        Self {
            generated_at: timestamp(),
            inputs,
            body,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::format("report", e.to_string()))
    }

    pub fn command(&self) -> &'static str {
        match self.body {
            ReportBody::Synth(_) => "synth",
            ReportBody::Train(_) => "train",
            ReportBody::Convert(_) => "convert",
            ReportBody::Mission(_) => "mission",
            ReportBody::Tradeoff(_) => "tradeoff",
        }
    }

    /// Human-readable summary.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let w = &mut out;
        line(
            w,
            format!("{} report, generated {}", self.command(), self.generated_at),
        );
        for (k, v) in &self.inputs {
            line(w, format!("  {k}: {v}"));
        }
        line(w, String::new());
        match &self.body {
            ReportBody::Synth(r) => render_synth(w, r),
            ReportBody::Train(r) => render_train(w, r),
            ReportBody::Convert(r) => render_convert(w, r),
            ReportBody::Mission(r) => render_mission(w, r),
            ReportBody::Tradeoff(r) => render_tradeoff(w, r),
        }
        out
    }
}

fn line(w: &mut String, s: String) {
    w.push_str(&s);
    w.push('\n');
}

fn render_ledger(w: &mut String, title: &str, ledger: &EnergyLedger) {
    line(w, format!("{title}:"));
    for e in &ledger.entries {
        line(
            w,
            format!(
                "  {:<14} {:>8.1} uW x {:>7.3} s = {:>8.4} mJ",
                e.stage, e.power_uw, e.duration_s, e.energy_mj
            ),
        );
    }
    line(
        w,
        format!("  {:<14} {:>36.4} mJ", "total", ledger.total_mj()),
    );
}

fn render_footprint(w: &mut String, title: &str, f: &FootprintReport) {
    line(
        w,
        format!(
            "{title}: {} model + {} working = {} bytes of {} ({})",
            f.model_bytes,
            f.working_buffer_bytes,
            f.total_bytes,
            f.limit_bytes,
            if f.fits { "fits" } else { "does not fit" }
        ),
    );
}

fn render_synth(w: &mut String, r: &SynthReport) {
    line(
        w,
        format!(
            "{} clips at {} Hz, {} samples each",
            r.total_clips, r.spec.sample_rate_hz, r.spec.clip_len
        ),
    );
    for (name, n) in r.class_names.iter().zip(&r.class_counts) {
        line(w, format!("  {name}: {n}"));
    }
}

fn render_train(w: &mut String, r: &TrainReport) {
    let s = &r.summary;
    line(
        w,
        format!(
            "model {}x{} -> {} classes, {} parameters, {} bytes",
            r.model.n, r.model.n, r.model.num_classes, r.param_count, r.model_bytes
        ),
    );
    line(
        w,
        format!(
            "{} epochs at learning rate {}",
            r.config.epochs, r.config.learning_rate
        ),
    );
    line(
        w,
        format!(
            "train accuracy {:.4} ({} clips)",
            s.train_accuracy, s.train_size
        ),
    );
    line(
        w,
        format!(
            "val accuracy   {:.4} ({} clips)",
            s.val_accuracy, s.val_size
        ),
    );
    line(
        w,
        format!(
            "test accuracy  {:.4} ({} clips)",
            s.test_accuracy, s.test_size
        ),
    );
    if let Some(last) = s.epoch_loss.last() {
        line(w, format!("final loss {last:.6}"));
    }
}

fn render_convert(w: &mut String, r: &ConvertReport) {
    line(
        w,
        format!(
            "{} parameters: {} bytes float32, {} bytes int16",
            r.param_count, r.float_bytes, r.quantized_bytes
        ),
    );
    for t in &r.tensors {
        line(
            w,
            format!(
                "  {:<14} {:>5} values, scale {:.4e}, max error {:.3e}",
                t.name, t.len, t.scale, t.max_abs_error
            ),
        );
    }
    render_footprint(w, "float32 footprint", &r.float_footprint);
    render_footprint(w, "int16 footprint", &r.footprint);
}

fn render_mission(w: &mut String, r: &RunReport) {
    line(
        w,
        format!("accuracy {:.4} ({}/{})", r.accuracy, r.correct, r.total),
    );
    line(
        w,
        format!("mean energy per trial {:.4} mJ", r.mean_energy_mj),
    );
    let l = &r.link;
    line(
        w,
        format!(
            "link: {} of {} frames delivered, BER {:.3e} ({} of {} payload bits)",
            l.delivered, r.total, l.ber, l.bit_errors, l.payload_bits
        ),
    );
    let e = &l.decode_errors;
    line(
        w,
        format!(
            "decode errors: {} no preamble, {} fm0 violation, {} crc mismatch",
            e.no_preamble, e.fm0_violation, e.crc_mismatch
        ),
    );
    render_footprint(w, "footprint", &r.config.footprint);
    line(w, String::new());
    line(
        w,
        "trial  clip  label  predicted  received  energy_mj".to_string(),
    );
    for t in &r.trials {
        let received = match (&t.received, &t.decode_error) {
            (Some(v), _) => v.to_string(),
            (None, Some(e)) => format!("({e})"),
            (None, None) => "-".to_string(),
        };
        line(
            w,
            format!(
                "{:>5} {:>5} {:>6} {:>10}  {:<8}  {:.4}",
                t.index, t.clip, t.label, t.predicted, received, t.energy_mj
            ),
        );
    }
}

fn render_tradeoff(w: &mut String, r: &TradeoffReport) {
    render_ledger(w, "on-board inference", &r.inference);
    render_ledger(w, "raw transmission", &r.raw);
    line(
        w,
        format!("raw transmission costs {:.2}% more", r.raw_excess_percent),
    );
    if let Some(t) = r.breakeven_inference_s {
        line(
            w,
            format!("inference stays cheaper while it takes under {t:.3} s"),
        );
    }
}
