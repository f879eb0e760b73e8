//! Closed-form average sum rates against quadrature, with the high-SNR guard.

use noma_as::analysis::{avg_sum_rate_a3, avg_sum_rate_aia, quadrature_avg_rate, snr_guard, GammaSDistribution, Kind};
use noma_as::link_model::{ScenarioConfig, SystemParams};

fn main() -> noma_as::Result<()> {
    println!("{:>6} {:>12} {:>12} {:>10} {:>10} {:>10}", "Ps", "AIA", "A3", "AIA gap", "A3 gap", "margin");
    for ps in [0.0, 10.0, 20.0, 30.0, 40.0] {
        let p = SystemParams::derive(ScenarioConfig { ps_dbm: ps, ..Default::default() })?;
        let aia = avg_sum_rate_aia(&p)?;
        let a3 = avg_sum_rate_a3(&p)?;
        let quad = |kind| -> noma_as::Result<f64> {
            let d = GammaSDistribution::new(&p, kind)?;
            Ok(quadrature_avg_rate(|x| d.pdf(x), &p)?.value)
        };
        let guard = snr_guard(&p);
        println!(
            "{ps:>6} {aia:>12.6} {a3:>12.6} {:>10.1e} {:>10.1e} {:>10.1}{}",
            ((aia - quad(Kind::Aia)?) / aia).abs(),
            ((a3 - quad(Kind::A3)?) / a3).abs(),
            guard.margin,
            if guard.valid { "" } else { "  (low SNR)" }
        );
    }
    Ok(())
}
