use serde::{Deserialize, Serialize};

use super::DeviceProfile;
use crate::error::{Error, Result};

/// Energy in millijoules drawn by a stage running at `power_uw` for `duration_s`.
pub fn stage_energy(power_uw: f64, duration_s: f64) -> Result<f64> {
    if !(power_uw >= 0.0 && duration_s >= 0.0) {
        return Err(Error::invalid(format!(
            "stage power and duration must be non-negative, got {power_uw} uW for {duration_s} s"
        )));
    }
    Ok(energy_mj(power_uw, duration_s))
}

// uW * s = uJ; 1e-3 converts to mJ
pub(crate) fn energy_mj(power_uw: f64, duration_s: f64) -> f64 {
    power_uw * duration_s * 1e-3
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub stage: String,
    pub power_uw: f64,
    pub duration_s: f64,
    pub energy_mj: f64,
}

/// Itemized energy account of one mission.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EnergyLedger {
    pub entries: Vec<LedgerEntry>,
}

impl EnergyLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&mut self, stage: &str, power_uw: f64, duration_s: f64) -> Result<&LedgerEntry> {
        let energy_mj = stage_energy(power_uw, duration_s)?;
        self.entries.push(LedgerEntry {
            stage: stage.to_string(),
            power_uw,
            duration_s,
            energy_mj,
        });
        Ok(self.entries.last().expect("just pushed"))
    }

    pub fn total_mj(&self) -> f64 {
        self.entries.iter().map(|e| e.energy_mj).sum()
    }

    pub fn total_time_s(&self) -> f64 {
        self.entries.iter().map(|e| e.duration_s).sum()
    }

    pub fn entry(&self, stage: &str) -> Option<&LedgerEntry> {
        self.entries.iter().find(|e| e.stage == stage)
    }
}

pub const STAGE_SAMPLING: &str = "adc_sampling";
pub const STAGE_INFERENCE: &str = "inference";
pub const STAGE_BACKSCATTER: &str = "backscatter";

/// Sample a window, classify it on board, backscatter the result.
pub fn inference_mission_energy(profile: &DeviceProfile) -> EnergyLedger {
    let mut ledger = EnergyLedger::new();
    let tx_s = profile.result_bits as f64 / profile.uplink_bps;
    for (stage, p, t) in [
        (STAGE_SAMPLING, profile.p_sampling_uw, profile.t_sampling_s),
        (
            STAGE_INFERENCE,
            profile.p_inference_uw,
            profile.t_inference_s,
        ),
        (STAGE_BACKSCATTER, profile.p_backscatter_uw, tx_s),
    ] {
        ledger
            .record(stage, p, t)
            .expect("profile values are non-negative");
    }
    ledger
}

/// Sample a window and backscatter every raw ADC code.
pub fn raw_transmission_energy(profile: &DeviceProfile) -> EnergyLedger {
    let mut ledger = EnergyLedger::new();
    let raw_bits = (profile.window_len * profile.adc_bits as usize) as f64;
    let tx_s = raw_bits / profile.uplink_bps;
    for (stage, p, t) in [
        (STAGE_SAMPLING, profile.p_sampling_uw, profile.t_sampling_s),
        (STAGE_BACKSCATTER, profile.p_backscatter_uw, tx_s),
    ] {
        ledger
            .record(stage, p, t)
            .expect("profile values are non-negative");
    }
    ledger
}

/// Inference time above which transmitting the raw window becomes cheaper
/// than classifying on board.
pub fn inference_breakeven_s(profile: &DeviceProfile) -> f64 {
    let raw_tx_s = (profile.window_len * profile.adc_bits as usize) as f64 / profile.uplink_bps;
    let result_tx_s = profile.result_bits as f64 / profile.uplink_bps;
    (raw_tx_s - result_tx_s) * profile.p_backscatter_uw / profile.p_inference_uw
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stage_rows() {
        assert!((stage_energy(932.0, 1.6).unwrap() - 1.4912).abs() < 1e-12);
        assert!((stage_energy(902.0, 0.012).unwrap() - 0.010824).abs() < 1e-12);
        assert_eq!(stage_energy(0.0, 17.0).unwrap(), 0.0);
        assert!(stage_energy(-1.0, 1.0).is_err());
        assert!(stage_energy(1.0, -1.0).is_err());
    }

    #[test]
    fn default_missions() {
        let p = DeviceProfile::default();
        let inf = inference_mission_energy(&p);
        assert_eq!(inf.entries.len(), 3);
        assert_eq!(inf.entry(STAGE_BACKSCATTER).unwrap().duration_s, 0.012);
        assert!((inf.total_mj() - 5.41).abs() <= 0.02);

        let raw = raw_transmission_energy(&p);
        assert_eq!(raw.entries.len(), 2);
        assert!((raw.entry(STAGE_BACKSCATTER).unwrap().duration_s - 6.144).abs() < 1e-12);
        assert!((raw.total_mj() - 7.03).abs() <= 0.02);
        assert!((raw.total_mj() / inf.total_mj() - 1.3019).abs() < 1e-3);
    }

    #[test]
    fn doubling_inference_time_adds_its_energy() {
        let p = DeviceProfile::default();
        let mut q = p.clone();
        q.t_inference_s *= 2.0;
        let delta =
            inference_mission_energy(&q).total_mj() - inference_mission_energy(&p).total_mj();
        assert!((delta - 3.9).abs() < 1e-12);
    }

    #[test]
    fn crossover_flips_sign() {
        let p = DeviceProfile::default();
        let t = inference_breakeven_s(&p);
        assert!((t - (6.144 * 902.0 - 0.012 * 902.0) / 1300.0).abs() < 1e-12);
        let margin = |t_inf: f64| {
            let mut q = p.clone();
            q.t_inference_s = t_inf;
            raw_transmission_energy(&q).total_mj() - inference_mission_energy(&q).total_mj()
        };
        assert!(margin(p.t_inference_s) > 0.0);
        assert!(margin(t * 0.999) > 0.0);
        assert!(margin(t * 1.001) < 0.0);
        assert!(margin(t).abs() < 1e-12);
    }
}
