//! Device constants, energy accounting and the harvest-gated scheduler.

mod capacitor;
mod ledger;
mod profile;
mod scheduler;

pub use capacitor::{harvest, Capacitor};
pub use ledger::{
    inference_breakeven_s, inference_mission_energy, raw_transmission_energy, stage_energy,
    EnergyLedger, LedgerEntry, STAGE_BACKSCATTER, STAGE_INFERENCE, STAGE_SAMPLING,
};
pub use profile::DeviceProfile;
pub use scheduler::{
    run_intermittent, HarvestSchedule, ScheduleOutcome, ScheduleTrace, Stage, TraceEvent,
    TraceInterval,
};
