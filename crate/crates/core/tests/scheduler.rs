mod common;

use aquanode::device::{
    harvest, run_intermittent, Capacitor, DeviceProfile, HarvestSchedule, ScheduleOutcome, Stage,
    TraceEvent,
};
use common::audit_trace;
use proptest::prelude::*;

fn schedule_strategy() -> impl Strategy<Value = HarvestSchedule> {
    (
        prop::collection::vec((0.0f64..5.0, prop_oneof![Just(0.0), 0.0f64..4.0]), 0..12),
        prop_oneof![Just(0.0), 0.0f64..3.0],
    )
        .prop_map(|(segments, tail)| HarvestSchedule::piecewise(segments, tail))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn energy_balances_on_every_interval(
        schedule in schedule_strategy(),
        initial_mj in 0.0f64..25.0,
        v_min in 0.0f64..1.0,
        capacitance_mf in 0.5f64..20.0,
        missions in 1usize..4,
        efficiency in 0.2f64..=1.0,
    ) {
        let profile = DeviceProfile {
            capacitance_f: capacitance_mf * 1e-3,
            cap_min_v: v_min,
            harvest_efficiency: efficiency,
            ..DeviceProfile::default()
        };
        let cap = Capacitor::new(profile.capacitance_f, 0.0, v_min).with_energy_mj(initial_mj);
        let plan: Vec<Stage> = (0..missions).flat_map(|_| Stage::MISSION).collect();
        let trace = run_intermittent(&cap, &profile, &plan, schedule.clone());

        let worst = audit_trace(&trace, cap.floor_mj()).map_err(TestCaseError::fail)?;
        prop_assert!(worst <= 1e-9, "residual {worst}");

        let harvested: f64 = trace.intervals.iter().map(|iv| iv.harvested_mj).sum();
        let consumed: f64 = trace.intervals.iter().map(|iv| iv.consumed_mj).sum();
        prop_assert!((trace.final_capacitor.stored_mj() - (initial_mj + harvested - consumed)).abs() < 1e-9);

        // accepted plus spilled never exceeds what the schedule delivered
        for iv in &trace.intervals {
            let offered = schedule.energy_between(iv.start_s, iv.end_s) * efficiency;
            prop_assert!(iv.harvested_mj + iv.spilled_mj <= offered + 1e-9);
        }

        let runs = trace.intervals.iter().filter(|iv| matches!(iv.event, TraceEvent::Run(_))).count();
        prop_assert_eq!(runs, trace.stages_run);
        match trace.outcome {
            ScheduleOutcome::Completed => prop_assert_eq!(runs, plan.len()),
            ScheduleOutcome::Starved(stage) => {
                prop_assert_eq!(stage, plan[runs]);
                let last = trace.intervals.last().unwrap();
                prop_assert_eq!(last.event, TraceEvent::Starved(stage));
            }
        }
    }
}

#[test]
fn harvest_matches_power_times_time() {
    let p = DeviceProfile::default();
    let cap = Capacitor::from_profile(&p);
    let charged = harvest(&cap, 2.0, 2.7, &p);
    assert!((charged.stored_mj() - 5.4).abs() < 1e-12);
}

#[test]
fn waits_exactly_long_enough_at_constant_power() {
    let p = DeviceProfile::default();
    let cap = Capacitor::from_profile(&p);
    let trace = run_intermittent(&cap, &p, &[Stage::Infer], 2.0);
    let wait = &trace.intervals[0];
    assert_eq!(wait.event, TraceEvent::Harvest);
    let needed = Stage::Infer.energy_mj(&p) * (1.0 + p.reserve_fraction);
    assert!((wait.end_s - needed / 2.0).abs() < 1e-12);
    assert_eq!(trace.outcome, ScheduleOutcome::Completed);
}
