use serde::{Deserialize, Serialize};

use crate::device::{
    inference_breakeven_s, inference_mission_energy, raw_transmission_energy, DeviceProfile,
    EnergyLedger,
};
use crate::error::Result;

/// On-board inference against shipping the raw window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TradeoffReport {
    pub profile: DeviceProfile,
    pub inference: EnergyLedger,
    pub inference_mj: f64,
    pub raw: EnergyLedger,
    pub raw_mj: f64,
    /// How much more energy the raw mission costs, in percent of the inference mission.
    pub raw_excess_percent: f64,
    /// Inference time at which both missions cost the same; `None` when
    /// inference draws no power.
    pub breakeven_inference_s: Option<f64>,
}

pub fn run_tradeoff(profile: &DeviceProfile) -> Result<TradeoffReport> {
    profile.validate()?;
    let inference = inference_mission_energy(profile);
    let raw = raw_transmission_energy(profile);
    let (inference_mj, raw_mj) = (inference.total_mj(), raw.total_mj());
    Ok(TradeoffReport {
        profile: profile.clone(),
        inference,
        inference_mj,
        raw,
        raw_mj,
        raw_excess_percent: (raw_mj / inference_mj - 1.0) * 100.0,
        breakeven_inference_s: (profile.p_inference_uw > 0.0)
            .then(|| inference_breakeven_s(profile)),
    })
}
