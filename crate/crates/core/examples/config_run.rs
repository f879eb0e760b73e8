//! Loads a sweep config and writes the CSV table the `simulate` command produces.
//!
//! ```text
//! cargo run --release --example config_run -- configs/fig4.cfg 5000
//! ```

use std::path::PathBuf;

use noma_as::cli::config::RunConfig;
use noma_as::cli::output::simulate_csv;
use noma_as::montecarlo::run_sweep;

fn main() -> noma_as::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = args.next().map(PathBuf::from).unwrap_or_else(|| PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/configs/fig4.cfg")));
    let mut cfg = RunConfig::load(&path)?;
    if let Some(trials) = args.next().and_then(|s| s.parse().ok()) {
        cfg.sweep.trials = trials;
    } else {
        cfg.sweep.trials = 5_000;
    }
    let result = run_sweep(&cfg.sweep, 1)?;
    print!("{}", simulate_csv(&cfg, &result));
    Ok(())
}
