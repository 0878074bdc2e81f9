use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::dataset::Dataset;
use super::features::online_features;
use crate::device::{
    DeviceProfile, EnergyLedger, STAGE_BACKSCATTER, STAGE_INFERENCE, STAGE_SAMPLING,
};
use crate::error::{Error, Result};
use crate::link::{
    fm0_decode_lenient, frame, receive, slice_chips, transmit, BitStream, ChannelModel, LinkError,
    PREAMBLE_BITS,
};
use crate::nn::ModelConfig;
use crate::quant::{FootprintReport, WeightsFile};

/// Everything a mission run depends on.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub profile: DeviceProfile,
    pub model: WeightsFile,
    pub dataset: Dataset,
    pub channel: ChannelModel,
    pub trials: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub index: usize,
    /// Dataset index of the clip played to the node.
    pub clip: usize,
    pub label: usize,
    pub predicted: usize,
    /// Class index recovered by the receiver, if the frame decoded.
    pub received: Option<usize>,
    pub decode_error: Option<String>,
    /// Payload bits in error, with the receiver aligned to the true frame start.
    pub payload_bit_errors: usize,
    pub energy: EnergyLedger,
    pub energy_mj: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecodeErrorCounts {
    pub no_preamble: usize,
    pub fm0_violation: usize,
    pub crc_mismatch: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkStats {
    pub payload_bits: usize,
    pub bit_errors: usize,
    pub ber: f64,
    pub delivered: usize,
    pub decode_errors: DecodeErrorCounts,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MissionConfig {
    pub profile: DeviceProfile,
    pub channel: ChannelModel,
    pub trials: usize,
    pub seed: u64,
    pub model: ModelConfig,
    pub quantized: bool,
    pub footprint: FootprintReport,
    pub class_names: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub config: MissionConfig,
    pub correct: usize,
    pub total: usize,
    pub accuracy: f64,
    pub mean_energy_mj: f64,
    pub link: LinkStats,
    pub trials: Vec<TrialRecord>,
}

/// Runs `scenario.trials` independent sense-infer-transmit cycles. Trial `i`
/// plays a seeded random clip of class `i mod C` and sees channel noise
/// seeded with `channel.seed + i`. Link failures are recorded, not returned.
pub fn run_mission(scenario: &Scenario) -> Result<RunReport> {
    let Scenario {
        profile,
        model,
        dataset,
        channel,
        trials,
        seed,
    } = scenario;
    profile.validate()?;
    channel.validate()?;
    if *trials == 0 {
        return Err(Error::invalid("a mission needs at least one trial"));
    }
    let config = model.config();
    if dataset.num_classes() != config.num_classes {
        return Err(Error::invalid(format!(
            "model has {} classes but the dataset has {}",
            config.num_classes,
            dataset.num_classes()
        )));
    }
    if config.num_classes > 1usize << profile.result_bits.min(63) {
        return Err(Error::invalid(format!(
            "{} classes do not fit a {}-bit result",
            config.num_classes, profile.result_bits
        )));
    }
    let by_class: Vec<Vec<usize>> = (0..config.num_classes)
        .map(|c| dataset.indices_of(c))
        .collect();
    if let Some(c) = by_class.iter().position(Vec::is_empty) {
        return Err(Error::invalid(format!(
            "class `{}` has no clips",
            dataset.class_names()[c]
        )));
    }
    let footprint = model.footprint(profile);
    if !footprint.fits {
        return Err(Error::DoesNotFit(footprint));
    }

    let outcomes = (0..*trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            rng.set_stream(i as u64);
            let label = i % config.num_classes;
            let pool = &by_class[label];
            let clip = pool[rng.random_range(0..pool.len())];
            let trial_channel = ChannelModel {
                seed: channel.seed.wrapping_add(i as u64),
                ..*channel
            };
            run_trial(i, clip, label, dataset, model, &trial_channel, profile)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut errors = DecodeErrorCounts::default();
    let mut records = Vec::with_capacity(outcomes.len());
    for (record, error) in outcomes {
        match error {
            Some(LinkError::NoPreamble) => errors.no_preamble += 1,
            Some(LinkError::Fm0Violation { .. }) => errors.fm0_violation += 1,
            Some(LinkError::CrcMismatch { .. }) => errors.crc_mismatch += 1,
            None => {}
        }
        records.push(record);
    }
    let total = records.len();
    let correct = records.iter().filter(|r| r.predicted == r.label).count();
    let payload_bits = total * profile.result_bits;
    let bit_errors: usize = records.iter().map(|r| r.payload_bit_errors).sum();
    Ok(RunReport {
        config: MissionConfig {
            profile: profile.clone(),
            channel: *channel,
            trials: *trials,
            seed: *seed,
            model: config,
            quantized: matches!(model, WeightsFile::Quantized(_)),
            footprint,
            class_names: dataset.class_names().to_vec(),
        },
        correct,
        total,
        accuracy: correct as f64 / total as f64,
        mean_energy_mj: records.iter().map(|r| r.energy_mj).sum::<f64>() / total as f64,
        link: LinkStats {
            payload_bits,
            bit_errors,
            ber: bit_errors as f64 / payload_bits as f64,
            delivered: records.iter().filter(|r| r.received.is_some()).count(),
            decode_errors: errors,
        },
        trials: records,
    })
}

fn run_trial(
    index: usize,
    clip: usize,
    label: usize,
    dataset: &Dataset,
    model: &WeightsFile,
    channel: &ChannelModel,
    profile: &DeviceProfile,
) -> Result<(TrialRecord, Option<LinkError>)> {
    let config = model.config();
    let plane = online_features(&dataset.clips()[clip].clip, profile, config.n)?;
    let predicted = model.forward(&plane)?.predicted_class;

    let width = profile.result_bits;
    let payload = BitStream::from_value(predicted as u64, width);
    let tx = transmit(&frame(&payload)?, channel, profile)?;
    let (received, link_error) = match receive(&tx.samples, Some(channel)) {
        Ok(bits) => (bits.to_value().map(|v| v as usize), None),
        Err(e) => (None, Some(e)),
    };
    // genie-aligned hard decisions over the payload chips
    let chips = slice_chips(&tx.samples, Some(channel));
    let start = 2 * PREAMBLE_BITS;
    let preamble_end = tx.signal.chips[start - 1];
    let decided = fm0_decode_lenient(&chips[start..start + 2 * width], Some(preamble_end)).bits;
    let payload_bit_errors = decided
        .bits()
        .iter()
        .zip(payload.bits())
        .filter(|(a, b)| a != b)
        .count();

    let mut energy = EnergyLedger::new();
    energy.record(STAGE_SAMPLING, profile.p_sampling_uw, profile.t_sampling_s)?;
    energy.record(
        STAGE_INFERENCE,
        profile.p_inference_uw,
        profile.t_inference_s,
    )?;
    energy.record(
        STAGE_BACKSCATTER,
        profile.p_backscatter_uw,
        tx.report.duration_s,
    )?;
    let record = TrialRecord {
        index,
        clip,
        label,
        predicted,
        received,
        decode_error: link_error.as_ref().map(ToString::to_string),
        payload_bit_errors,
        energy_mj: energy.total_mj(),
        energy,
    };
    Ok((record, link_error))
}
