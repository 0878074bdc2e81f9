//! Frame a result, FM0-encode it, push it through a noisy channel and
//! decode it, sweeping the noise level.

use aquanode::device::DeviceProfile;
use aquanode::link::{
    bit_error_rate, fm0_decode, fm0_encode, frame, receive, transmit, BitStream, ChannelModel,
    Level,
};

fn main() -> aquanode::Result<()> {
    let profile = DeviceProfile::default();
    let payload = BitStream::from_value(2, 12);
    let packet = frame(&payload)?;
    let signal = fm0_encode(&packet.to_bits(), Level::Low);
    let chips: String = signal
        .chips
        .iter()
        .map(|c| if *c == Level::High { 'H' } else { 'L' })
        .collect();
    println!(
        "{} bits, {} chips: {chips}",
        packet.to_bits().len(),
        chips.len()
    );
    assert_eq!(
        fm0_decode(&signal.chips, Some(Level::Low)).unwrap(),
        packet.to_bits()
    );

    let clean = transmit(&packet, &ChannelModel::default(), &profile)?;
    println!(
        "airtime {:.3} s, {:.4} mJ",
        clean.report.duration_s, clean.report.energy_mj
    );

    println!("\nsigma   chip BER   frames ok / 200");
    for sigma in [0.0, 0.1, 0.2, 0.3, 0.4] {
        let mut ok = 0;
        let mut ber = 0.0;
        for seed in 0..200 {
            let ch = ChannelModel {
                attenuation: 1.0,
                noise_sigma: sigma,
                seed,
            };
            let tx = transmit(&packet, &ch, &profile)?;
            let decided: BitStream = tx.samples.iter().map(|&s| s > ch.threshold()).collect();
            let sent: BitStream = tx.signal.chips.iter().map(|&c| c == Level::High).collect();
            ber += bit_error_rate(&sent, &decided) / 200.0;
            if receive(&tx.samples, Some(&ch)).is_ok_and(|p| p == payload) {
                ok += 1;
            }
        }
        println!("{sigma:5.2}   {ber:8.5}   {ok}");
    }
    Ok(())
}
