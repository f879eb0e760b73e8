//! Monte Carlo sweep over transmit power, every scheme, printed as a table.

use noma_as::link_model::SystemParams;
use noma_as::montecarlo::{run_sweep, Scheme, SweepAxis, SweepSpec};

fn main() -> noma_as::Result<()> {
    let trials = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(20_000);
    let spec = SweepSpec {
        base: SystemParams::default(),
        axis: SweepAxis::PsDbm,
        points: (0..=8).map(|i| 5.0 * i as f64).collect(),
        trials,
        seed: 2017,
        schemes: Scheme::ALL.to_vec(),
    };
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    let result = run_sweep(&spec, workers)?;

    print!("{:>5}", "Ps");
    for s in &spec.schemes {
        print!(" {:>12}", s.name());
    }
    println!();
    for pt in &result.points {
        print!("{:>5}", pt.point);
        for row in &pt.rows {
            match row.mean_rsum() {
                Some(v) => print!(" {v:>12.4}"),
                None => print!(" {:>12}", "skipped"),
            }
        }
        println!();
    }
    let violations: u64 = result.points.iter().map(|p| p.dominance_violations).sum();
    println!("exhaustive search dominated every heuristic: {}", violations == 0);
    Ok(())
}
