//! Run one sense-infer-transmit mission from an empty supercapacitor under a
//! harvest that fades out and comes back.

use aquanode::device::{
    run_intermittent, Capacitor, DeviceProfile, HarvestSchedule, Stage, TraceEvent,
};

fn main() {
    let profile = DeviceProfile::default();
    let cap = Capacitor::from_profile(&profile);
    let schedule = HarvestSchedule::piecewise(vec![(2.0, 2.0), (3.0, 0.0), (4.0, 0.5)], 1.5);
    let trace = run_intermittent(&cap, &profile, &Stage::MISSION, schedule);

    println!("  start     end  event              stored before -> after (mJ)");
    for iv in &trace.intervals {
        let event = match iv.event {
            TraceEvent::Harvest => "harvest".to_string(),
            TraceEvent::Run(s) => format!("run {s:?}"),
            TraceEvent::Starved(s) => format!("starved {s:?}"),
        };
        println!(
            "{:7.3} {:7.3}  {event:<17}  {:8.4} -> {:8.4}",
            iv.start_s, iv.end_s, iv.stored_before_mj, iv.stored_after_mj
        );
    }
    println!(
        "{:?} after {:.3} s ({:.3} s active), {:.3} V left on the capacitor",
        trace.outcome,
        trace.total_time_s,
        trace.active_time_s,
        trace.final_capacitor.voltage_v()
    );
}
