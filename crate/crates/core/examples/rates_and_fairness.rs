//! NOMA and OMA rates for a fixed pair of link gains, with Jain's index.

use noma_as::link_model::{jain_index, noma_rates, oma_rates, ScenarioConfig, SystemParams};

fn main() -> noma_as::Result<()> {
    let p = SystemParams::derive(ScenarioConfig { ps_dbm: 10.0, sigma_dbm: 0.0, ..Default::default() })?;
    println!("rho = {}, a = {}, b = {}", p.rho(), p.a(), p.b());

    for (h, g) in [(2.0, 1.0), (1.0, 2.0), (0.5, 0.5), (4.0, 0.1)] {
        let noma = noma_rates(h, g, &p);
        let oma = oma_rates(h, g, &p);
        println!(
            "h={h:<4} g={g:<4} NOMA r1={:.4} r2={:.4} sum={:.4} eta={:.4} | OMA sum={:.4} eta={:.4}",
            noma.r1, noma.r2, noma.r_sum, noma.eta, oma.r_sum, oma.eta
        );
    }

    println!("jain(1.7, 1.7) = {}", jain_index(1.7, 1.7));
    println!("jain(1, 0)     = {}", jain_index(1.0, 0.0));
    Ok(())
}
