use serde::{Deserialize, Serialize};

use super::DeviceProfile;

/// Storage element charged by the harvester.
///
/// The state is held as stored energy so that charge/discharge bookkeeping is
/// exact; voltage is derived from `E = C V^2 / 2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Capacitor {
    capacitance_f: f64,
    energy_mj: f64,
    v_min_operate: f64,
}

fn energy_at(capacitance_f: f64, voltage_v: f64) -> f64 {
    0.5 * capacitance_f * voltage_v * voltage_v * 1e3
}

impl Capacitor {
    pub fn new(capacitance_f: f64, voltage_v: f64, v_min_operate: f64) -> Self {
        assert!(capacitance_f > 0.0, "capacitance must be positive");
        assert!(
            voltage_v >= 0.0 && v_min_operate >= 0.0,
            "voltages must be non-negative"
        );
        Self {
            capacitance_f,
            energy_mj: energy_at(capacitance_f, voltage_v),
            v_min_operate,
        }
    }

    /// An empty capacitor sized by the profile.
    pub fn from_profile(profile: &DeviceProfile) -> Self {
        Self::new(profile.capacitance_f, 0.0, profile.cap_min_v)
    }

    pub fn with_energy_mj(mut self, energy_mj: f64) -> Self {
        assert!(energy_mj >= 0.0);
        self.energy_mj = energy_mj;
        self
    }

    pub fn capacitance_f(&self) -> f64 {
        self.capacitance_f
    }

    pub fn voltage_v(&self) -> f64 {
        (2.0 * self.energy_mj * 1e-3 / self.capacitance_f).sqrt()
    }

    pub fn v_min_operate(&self) -> f64 {
        self.v_min_operate
    }

    pub fn stored_mj(&self) -> f64 {
        self.energy_mj
    }

    /// Energy left below the minimum operating voltage; never usable.
    pub fn floor_mj(&self) -> f64 {
        energy_at(self.capacitance_f, self.v_min_operate)
    }

    pub fn usable_mj(&self) -> f64 {
        (self.energy_mj - self.floor_mj()).max(0.0)
    }

    pub(crate) fn set_stored_mj(&mut self, energy_mj: f64) {
        self.energy_mj = energy_mj.max(0.0);
    }

    pub fn rated_energy_mj(&self, profile: &DeviceProfile) -> f64 {
        energy_at(self.capacitance_f, profile.cap_rated_v)
    }
}

/// Charges `cap` at `harvest_power_mw` for `dt_s`, scaled by the profile's
/// harvest efficiency and capped at the rated voltage.
pub fn harvest(
    cap: &Capacitor,
    harvest_power_mw: f64,
    dt_s: f64,
    profile: &DeviceProfile,
) -> Capacitor {
    let gained = harvest_power_mw.max(0.0) * dt_s.max(0.0) * profile.harvest_efficiency;
    let mut out = cap.clone();
    let ceiling = cap.rated_energy_mj(profile).max(cap.energy_mj);
    out.energy_mj = (cap.energy_mj + gained).min(ceiling);
    out
}
