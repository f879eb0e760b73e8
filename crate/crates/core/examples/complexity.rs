//! Operation counts of exhaustive search against the staged heuristics.

use noma_as::link_model::{ScenarioConfig, SystemParams};
use noma_as::montecarlo::sample_realization;
use noma_as::selection::{a3_select, aia_select, exhaustive_search};

fn main() -> noma_as::Result<()> {
    println!("{:>3} {:>3} {:>3} {:>8} {:>8} {:>8} {:>12}", "N", "M", "K", "ES", "AIA", "A3", "2N(M+K+3)");
    for (n, m, k) in [(2, 2, 2), (4, 2, 2), (8, 2, 2), (4, 4, 4), (8, 8, 8), (16, 16, 16)] {
        let p = SystemParams::derive(ScenarioConfig { n_bs: n, n_ue1: m, n_ue2: k, ..Default::default() })?;
        let ch = sample_realization(&p, 0, 1);
        println!(
            "{n:>3} {m:>3} {k:>3} {:>8} {:>8} {:>8} {:>12}",
            exhaustive_search(&ch, &p).op_count,
            aia_select(&ch).op_count,
            a3_select(&ch).op_count,
            2 * n * (m + k + 3)
        );
    }
    Ok(())
}
