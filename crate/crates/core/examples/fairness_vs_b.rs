//! Jain fairness of the two heuristics as the power split changes.

use noma_as::link_model::{ScenarioConfig, SystemParams};
use noma_as::montecarlo::{run_sweep, Scheme, SweepAxis, SweepSpec};

fn main() -> noma_as::Result<()> {
    let base = SystemParams::derive(ScenarioConfig { n_bs: 4, d1: 60.0, ps_dbm: 20.0, ..Default::default() })?;
    let spec = SweepSpec {
        base,
        axis: SweepAxis::BCoeff,
        points: vec![0.1, 0.2, 0.3, 0.4, 0.49],
        trials: 20_000,
        seed: 2017,
        schemes: vec![Scheme::Aia, Scheme::A3],
    };
    let result = run_sweep(&spec, 1)?;
    println!("{:>5} {:>16} {:>16}", "b", "eta AIA", "eta A3");
    for pt in &result.points {
        let aia = pt.sim(Scheme::Aia).expect("simulated");
        let a3 = pt.sim(Scheme::A3).expect("simulated");
        println!(
            "{:>5} {:>9.4} ± {:.4} {:>9.4} ± {:.4}",
            pt.point, aia.mean_eta, aia.stderr_eta, a3.mean_eta, a3.stderr_eta
        );
    }
    Ok(())
}
