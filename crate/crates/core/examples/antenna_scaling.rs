//! Sum rate as the BS antenna count grows, simulated and closed form.

use noma_as::link_model::{ScenarioConfig, SystemParams};
use noma_as::montecarlo::{run_sweep, Scheme, SweepAxis, SweepSpec};

fn main() -> noma_as::Result<()> {
    let spec = SweepSpec {
        base: SystemParams::derive(ScenarioConfig { ps_dbm: 20.0, ..Default::default() })?,
        axis: SweepAxis::NBs,
        points: (1..=8).map(f64::from).collect(),
        trials: 20_000,
        seed: 2017,
        schemes: vec![Scheme::NomaEs, Scheme::Aia, Scheme::A3, Scheme::NomaRan, Scheme::AiaAnalytic, Scheme::A3Analytic],
    };
    let result = run_sweep(&spec, 1)?;
    for s in &spec.schemes {
        let curve: Vec<String> = result
            .curve(*s)
            .iter()
            .map(|v| v.map_or_else(|| "-".to_string(), |v| format!("{v:.3}")))
            .collect();
        println!("{:>12}: {}", s.name(), curve.join(" "));
    }
    Ok(())
}
