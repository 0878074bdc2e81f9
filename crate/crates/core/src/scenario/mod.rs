//! End-to-end scenarios: synthetic data, training, missions and reports.

mod convert;
mod dataset;
mod features;
mod mission;
pub mod report;
mod synth;
mod tradeoff;
mod training;

pub use convert::convert;
pub use dataset::{Dataset, LabeledClip};
pub use features::{offline_features, online_features};
pub use mission::{
    run_mission, DecodeErrorCounts, LinkStats, MissionConfig, RunReport, Scenario, TrialRecord,
};
pub use report::{ConvertReport, Report, ReportBody, SynthReport, TensorQuantization, TrainReport};
pub use synth::{synth_dataset, SignalFamily, SyntheticDatasetSpec};
pub use tradeoff::{run_tradeoff, TradeoffReport};
pub use training::{
    dataset_features, run_training, split_dataset, Split, TrainingConfig, TrainingRun,
    TrainingSummary, MIN_CLIPS_PER_CLASS,
};
