//! Intermittent execution: a stage starts only once the capacitor holds its
//! cost plus a reserve margin; otherwise the node sleeps and harvests.

use serde::{Deserialize, Serialize};

use super::ledger::energy_mj;
use super::{Capacitor, DeviceProfile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Sample,
    Infer,
    Backscatter,
}

impl Stage {
    pub const MISSION: [Stage; 3] = [Stage::Sample, Stage::Infer, Stage::Backscatter];

    pub fn duration_s(self, profile: &DeviceProfile) -> f64 {
        match self {
            Stage::Sample => profile.t_sampling_s,
            Stage::Infer => profile.t_inference_s,
            Stage::Backscatter => profile.result_bits as f64 / profile.uplink_bps,
        }
    }

    pub fn power_uw(self, profile: &DeviceProfile) -> f64 {
        match self {
            Stage::Sample => profile.p_sampling_uw,
            Stage::Infer => profile.p_inference_uw,
            Stage::Backscatter => profile.p_backscatter_uw,
        }
    }

    pub fn energy_mj(self, profile: &DeviceProfile) -> f64 {
        energy_mj(self.power_uw(profile), self.duration_s(profile))
    }
}

/// Piecewise-constant harvested power. After the last segment the tail power
/// applies forever.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarvestSchedule {
    /// `(duration_s, power_mw)` segments in time order.
    pub segments: Vec<(f64, f64)>,
    pub tail_power_mw: f64,
}

impl HarvestSchedule {
    pub fn constant(power_mw: f64) -> Self {
        Self {
            segments: Vec::new(),
            tail_power_mw: power_mw.max(0.0),
        }
    }

    pub fn piecewise(segments: Vec<(f64, f64)>, tail_power_mw: f64) -> Self {
        let segments = segments
            .into_iter()
            .map(|(d, p)| (d.max(0.0), p.max(0.0)))
            .collect();
        Self {
            segments,
            tail_power_mw: tail_power_mw.max(0.0),
        }
    }

    /// `(start, end, power)` pieces covering `[t0, t1)`.
    fn pieces(&self, t0: f64, t1: f64) -> Vec<(f64, f64, f64)> {
        let mut out = Vec::new();
        let mut start = 0.0;
        for &(d, p) in &self.segments {
            let end = start + d;
            let (a, b) = (start.max(t0), end.min(t1));
            if b > a {
                out.push((a, b, p));
            }
            start = end;
        }
        let a = start.max(t0);
        if t1 > a {
            out.push((a, t1, self.tail_power_mw));
        }
        out
    }

    /// Gross energy in mJ harvested over `[t0, t1)`.
    pub fn energy_between(&self, t0: f64, t1: f64) -> f64 {
        self.pieces(t0, t1)
            .iter()
            .map(|&(a, b, p)| p * (b - a))
            .sum()
    }

    /// Time after `t0` at which `needed_mj` gross energy has been harvested.
    /// If the schedule never delivers it, the error holds the time harvesting
    /// stops for good and the energy gathered until then.
    fn time_to_accumulate(&self, t0: f64, needed_mj: f64) -> Result<f64, (f64, f64)> {
        if needed_mj <= 0.0 {
            return Ok(t0);
        }
        let mut acc = 0.0;
        let mut start = 0.0;
        for &(d, p) in &self.segments {
            let end = start + d;
            let a = start.max(t0);
            if end > a && p > 0.0 {
                let gain = p * (end - a);
                if acc + gain >= needed_mj {
                    return Ok(a + (needed_mj - acc) / p);
                }
                acc += gain;
            }
            start = end;
        }
        let a = start.max(t0);
        if self.tail_power_mw > 0.0 {
            Ok(a + (needed_mj - acc) / self.tail_power_mw)
        } else {
            Err((a, acc))
        }
    }
}

impl From<f64> for HarvestSchedule {
    fn from(power_mw: f64) -> Self {
        HarvestSchedule::constant(power_mw)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "event", content = "stage")]
pub enum TraceEvent {
    Harvest,
    Run(Stage),
    Starved(Stage),
}

/// One step of the schedule. `stored_after = stored_before + harvested - consumed`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceInterval {
    pub start_s: f64,
    pub end_s: f64,
    pub event: TraceEvent,
    pub stored_before_mj: f64,
    pub stored_after_mj: f64,
    /// Energy accepted into the capacitor.
    pub harvested_mj: f64,
    pub consumed_mj: f64,
    /// Harvest lost because the capacitor was at its rated voltage.
    pub spilled_mj: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "outcome", content = "stage")]
pub enum ScheduleOutcome {
    Completed,
    Starved(Stage),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScheduleTrace {
    pub intervals: Vec<TraceInterval>,
    pub outcome: ScheduleOutcome,
    pub stages_run: usize,
    pub total_time_s: f64,
    pub active_time_s: f64,
    pub final_capacitor: Capacitor,
}

/// Runs `mission` in order on `cap`, sleeping to harvest whenever the next
/// stage's cost plus reserve is not yet stored.
///
/// A stage that can never be afforded (harvest stops, or the cost exceeds
/// what the capacitor can hold) ends the trace with a `Starved` event.
pub fn run_intermittent(
    cap: &Capacitor,
    profile: &DeviceProfile,
    mission: &[Stage],
    harvest: impl Into<HarvestSchedule>,
) -> ScheduleTrace {
    let schedule = harvest.into();
    let eff = profile.harvest_efficiency;
    let e_max = cap.rated_energy_mj(profile).max(cap.stored_mj());
    let floor = cap.floor_mj();

    let mut t = 0.0;
    let mut stored = cap.stored_mj();
    let mut intervals = Vec::new();
    let mut active = 0.0;
    let mut stages_run = 0;
    let mut outcome = ScheduleOutcome::Completed;

    for &stage in mission {
        let cost = stage.energy_mj(profile);
        let duration = stage.duration_s(profile);
        let threshold = floor + cost * (1.0 + profile.reserve_fraction);

        if threshold > e_max {
            intervals.push(starved(t, stage, stored));
            outcome = ScheduleOutcome::Starved(stage);
            break;
        }

        if stored < threshold {
            let deficit_gross = (threshold - stored) / eff;
            match schedule.time_to_accumulate(t, deficit_gross) {
                Ok(t_ready) => {
                    let harvested = schedule.energy_between(t, t_ready) * eff;
                    intervals.push(TraceInterval {
                        start_s: t,
                        end_s: t_ready,
                        event: TraceEvent::Harvest,
                        stored_before_mj: stored,
                        stored_after_mj: stored + harvested,
                        harvested_mj: harvested,
                        consumed_mj: 0.0,
                        spilled_mj: 0.0,
                    });
                    stored += harvested;
                    t = t_ready;
                }
                Err((t_end, gross)) => {
                    if t_end > t {
                        let harvested = gross * eff;
                        intervals.push(TraceInterval {
                            start_s: t,
                            end_s: t_end,
                            event: TraceEvent::Harvest,
                            stored_before_mj: stored,
                            stored_after_mj: stored + harvested,
                            harvested_mj: harvested,
                            consumed_mj: 0.0,
                            spilled_mj: 0.0,
                        });
                        stored += harvested;
                        t = t_end;
                    }
                    intervals.push(starved(t, stage, stored));
                    outcome = ScheduleOutcome::Starved(stage);
                    break;
                }
            }
        }

        // rounding in the wait interval can leave `stored` a hair below the
        // threshold; the cost itself must always be covered
        if stored - floor < cost {
            intervals.push(starved(t, stage, stored));
            outcome = ScheduleOutcome::Starved(stage);
            break;
        }

        let gross = schedule.energy_between(t, t + duration) * eff;
        let room = e_max - (stored - cost);
        let accepted = gross.min(room).max(0.0);
        let after = stored + accepted - cost;
        intervals.push(TraceInterval {
            start_s: t,
            end_s: t + duration,
            event: TraceEvent::Run(stage),
            stored_before_mj: stored,
            stored_after_mj: after,
            harvested_mj: accepted,
            consumed_mj: cost,
            spilled_mj: gross - accepted,
        });
        stored = after;
        t += duration;
        active += duration;
        stages_run += 1;
    }

    let mut final_capacitor = cap.clone();
    final_capacitor.set_stored_mj(stored);
    ScheduleTrace {
        intervals,
        outcome,
        stages_run,
        total_time_s: t,
        active_time_s: active,
        final_capacitor,
    }
}

fn starved(t: f64, stage: Stage, stored: f64) -> TraceInterval {
    TraceInterval {
        start_s: t,
        end_s: t,
        event: TraceEvent::Starved(stage),
        stored_before_mj: stored,
        stored_after_mj: stored,
        harvested_mj: 0.0,
        consumed_mj: 0.0,
        spilled_mj: 0.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precharged_runs_back_to_back() {
        let p = DeviceProfile::default();
        let cap = Capacitor::from_profile(&p).with_energy_mj(6.0);
        let trace = run_intermittent(&cap, &p, &Stage::MISSION, 0.0);
        assert_eq!(trace.outcome, ScheduleOutcome::Completed);
        assert_eq!(trace.stages_run, 3);
        assert!((trace.active_time_s - (1.6 + 3.0 + 0.012)).abs() < 1e-12);
        assert_eq!(trace.total_time_s, trace.active_time_s);
        assert!(trace
            .intervals
            .iter()
            .all(|i| matches!(i.event, TraceEvent::Run(_))));
    }

    #[test]
    fn empty_capacitor_waits_for_first_stage() {
        let p = DeviceProfile::default();
        let trace = run_intermittent(&Capacitor::from_profile(&p), &p, &Stage::MISSION, 2.0);
        assert_eq!(trace.outcome, ScheduleOutcome::Completed);
        let first_run = trace
            .intervals
            .iter()
            .find(|i| matches!(i.event, TraceEvent::Run(_)))
            .unwrap();
        assert!(first_run.start_s >= Stage::Sample.energy_mj(&p) / 2.0);
    }

    #[test]
    fn empty_capacitor_without_harvest_starves() {
        let p = DeviceProfile::default();
        let trace = run_intermittent(&Capacitor::from_profile(&p), &p, &Stage::MISSION, 0.0);
        assert_eq!(trace.outcome, ScheduleOutcome::Starved(Stage::Sample));
        assert_eq!(trace.stages_run, 0);
    }

    #[test]
    fn stage_larger_than_capacitor_starves() {
        let p = DeviceProfile {
            capacitance_f: 1e-4,
            ..DeviceProfile::default()
        };
        let trace = run_intermittent(&Capacitor::from_profile(&p), &p, &Stage::MISSION, 5.0);
        assert_eq!(trace.outcome, ScheduleOutcome::Starved(Stage::Sample));
    }

    #[test]
    fn piecewise_schedule_integrates() {
        let s = HarvestSchedule::piecewise(vec![(1.0, 2.0), (2.0, 0.0), (1.0, 4.0)], 1.0);
        assert!((s.energy_between(0.0, 5.0) - (2.0 + 0.0 + 4.0 + 1.0)).abs() < 1e-12);
        assert!((s.energy_between(0.5, 3.5) - (1.0 + 2.0)).abs() < 1e-12);
        assert_eq!(s.time_to_accumulate(0.0, 3.0), Ok(3.25));
        let dry = HarvestSchedule::piecewise(vec![(1.0, 2.0)], 0.0);
        assert_eq!(dry.time_to_accumulate(0.0, 3.0), Err((1.0, 2.0)));
    }
}
