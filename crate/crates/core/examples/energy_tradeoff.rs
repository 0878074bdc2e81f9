//! Energy of classifying on board versus shipping the raw ADC window, and
//! how the answer moves with inference time.

use aquanode::device::{inference_breakeven_s, DeviceProfile};
use aquanode::scenario::run_tradeoff;

fn main() -> aquanode::Result<()> {
    let profile = DeviceProfile::default();
    let r = run_tradeoff(&profile)?;
    for (name, ledger) in [("inference", &r.inference), ("raw", &r.raw)] {
        println!("{name} mission");
        for e in &ledger.entries {
            println!("  {:<14} {:8.4} mJ", e.stage, e.energy_mj);
        }
        println!("  {:<14} {:8.4} mJ", "total", ledger.total_mj());
    }
    println!("raw costs {:.2}% more", r.raw_excess_percent);

    println!("\nt_inference_s  inference_mj  raw_mj");
    for t in [
        0.5,
        1.0,
        2.0,
        3.0,
        4.0,
        inference_breakeven_s(&profile),
        5.0,
    ] {
        let p = DeviceProfile {
            t_inference_s: t,
            ..profile.clone()
        };
        let r = run_tradeoff(&p)?;
        println!("{t:13.3}  {:12.4}  {:6.4}", r.inference_mj, r.raw_mj);
    }
    Ok(())
}
