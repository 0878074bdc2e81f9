use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use aquanode::device::DeviceProfile;
use aquanode::link::ChannelModel;
use aquanode::nn::save_model;
use aquanode::quant::{load_weights, save_quantized, WeightsFile};
use aquanode::scenario::{
    convert, run_mission, run_tradeoff, run_training, synth_dataset, Dataset, Report, ReportBody,
    Scenario, SynthReport, SyntheticDatasetSpec, TrainReport, TrainingConfig,
};
use aquanode::{Error, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

/// Battery-free underwater inference node simulator.
#[derive(Parser)]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Device profile (`key = value` lines); defaults apply to missing keys.
    #[arg(long)]
    profile: Option<PathBuf>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a labeled synthetic dataset as class directories of WAV files.
    Synth {
        #[arg(long)]
        out: PathBuf,
        /// JSON dataset spec; overrides the built-in four-class set.
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long, default_value_t = 25)]
        clips_per_class: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Train a float32 classifier on an 80/10/10 split of a dataset directory.
    Train {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 16)]
        n: usize,
        #[arg(long, default_value_t = 30)]
        epochs: usize,
        #[arg(long, default_value_t = 0.01)]
        lr: f64,
        #[arg(long, default_value_t = 1)]
        init_seed: u64,
        #[arg(long, default_value_t = 2)]
        split_seed: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Quantize a float32 model to int16 and check it against the memory budget.
    Convert {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Run sense-infer-transmit trials through the ADC path and uplink.
    Mission {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long, default_value_t = 16)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1.0)]
        attenuation: f64,
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
        #[arg(long, default_value_t = 0)]
        channel_seed: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Compare on-board inference against raw transmission energy.
    Tradeoff {
        #[command(flatten)]
        common: Common,
    },
    /// Re-render a saved report.
    Report {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Write here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

fn load_profile(common: &Common) -> Result<DeviceProfile> {
    match &common.profile {
        Some(path) => DeviceProfile::load(path),
        None => Ok(DeviceProfile::default()),
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => Ok(fs::write(path, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn finish(common: &Common, mut inputs: BTreeMap<String, String>, body: ReportBody) -> Result<()> {
    let profile = match &common.profile {
        Some(p) => p.display().to_string(),
        None => "default".to_string(),
    };
    inputs.insert("profile".into(), profile);
    emit(
        common.report.as_deref(),
        &Report::new(inputs, body).to_json()?,
    )
}

fn inputs<const N: usize>(pairs: [(&str, String); N]) -> BTreeMap<String, String> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Synth {
            out,
            spec,
            clips_per_class,
            seed,
            common,
        } => {
            let profile = load_profile(&common)?;
            let spec = match &spec {
                Some(path) => {
                    serde_json::from_str(&fs::read_to_string(path)?).map_err(|e| Error::Format {
                        field: "spec".into(),
                        reason: e.to_string(),
                    })?
                }
                None => {
                    SyntheticDatasetSpec::four_class(profile.adc_rate_hz, clips_per_class, seed)
                }
            };
            let dataset = synth_dataset(&spec)?;
            dataset.write_dir(&out)?;
            let body = ReportBody::Synth(SynthReport {
                class_names: dataset.class_names().to_vec(),
                class_counts: dataset.class_counts(),
                total_clips: dataset.len(),
                spec,
            });
            finish(&common, inputs([("out", out.display().to_string())]), body)
        }
        Command::Train {
            dataset,
            out,
            n,
            epochs,
            lr,
            init_seed,
            split_seed,
            common,
        } => {
            let profile = load_profile(&common)?;
            let data = Dataset::read_dir(&dataset)?;
            let config = TrainingConfig {
                n,
                epochs,
                learning_rate: lr,
                init_seed,
                split_seed,
            };
            let run = run_training(&data, &config, &profile)?;
            let bytes = save_model(&run.model)?;
            fs::write(&out, &bytes)?;
            let body = ReportBody::Train(TrainReport {
                config,
                class_names: data.class_names().to_vec(),
                model: run.model.config,
                param_count: run.model.param_count(),
                model_bytes: bytes.len(),
                summary: run.summary,
            });
            let echo = inputs([
                ("dataset", dataset.display().to_string()),
                ("out", out.display().to_string()),
            ]);
            finish(&common, echo, body)
        }
        Command::Convert { model, out, common } => {
            let profile = load_profile(&common)?;
            let float = match load_weights(&fs::read(&model)?)? {
                WeightsFile::Float(m) => m,
                WeightsFile::Quantized(_) => {
                    return Err(Error::InvalidInput(format!(
                        "{} is already quantized",
                        model.display()
                    )))
                }
            };
            let (q, report) = convert(&float, &profile);
            fs::write(&out, save_quantized(&q)?)?;
            let echo = inputs([
                ("model", model.display().to_string()),
                ("out", out.display().to_string()),
            ]);
            finish(&common, echo, ReportBody::Convert(report))
        }
        Command::Mission {
            model,
            dataset,
            trials,
            seed,
            attenuation,
            noise,
            channel_seed,
            common,
        } => {
            let scenario = Scenario {
                profile: load_profile(&common)?,
                model: load_weights(&fs::read(&model)?)?,
                dataset: Dataset::read_dir(&dataset)?,
                channel: ChannelModel {
                    attenuation,
                    noise_sigma: noise,
                    seed: channel_seed,
                },
                trials,
                seed,
            };
            let report = run_mission(&scenario)?;
            let echo = inputs([
                ("model", model.display().to_string()),
                ("dataset", dataset.display().to_string()),
            ]);
            finish(&common, echo, ReportBody::Mission(report))
        }
        Command::Tradeoff { common } => {
            let report = run_tradeoff(&load_profile(&common)?)?;
            finish(&common, BTreeMap::new(), ReportBody::Tradeoff(report))
        }
        Command::Report { input, format, out } => {
            let report = Report::from_json(&fs::read_to_string(&input)?)?;
            let text = match format {
                Format::Text => report.render_text(),
                Format::Json => report.to_json()?,
            };
            emit(out.as_deref(), &text)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
