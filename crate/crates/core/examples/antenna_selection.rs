//! Runs every selector on one channel draw and compares the resulting sum rates.

use noma_as::link_model::{noma_rates, oma_rates, SystemParams};
use noma_as::montecarlo::{sample_realization, selection_stream};
use noma_as::selection::{a3_select, aia_select, exhaustive_search, oma_select, random_select};
use noma_as::ScenarioConfig;

fn main() -> noma_as::Result<()> {
    let p = SystemParams::derive(ScenarioConfig { n_bs: 4, n_ue1: 3, n_ue2: 2, ps_dbm: 20.0, ..Default::default() })?;
    let ch = sample_realization(&p, 0, 42);

    println!("h (x1e5):");
    for i in 0..ch.n_bs() {
        println!("  {:?}", ch.h.row(i).iter().map(|v| (v * 1e5 * 1000.0).round() / 1000.0).collect::<Vec<_>>());
    }
    println!("g (x1e7):");
    for i in 0..ch.n_bs() {
        println!("  {:?}", ch.g.row(i).iter().map(|v| (v * 1e7 * 1000.0).round() / 1000.0).collect::<Vec<_>>());
    }

    let picks = [
        ("ES", exhaustive_search(&ch, &p)),
        ("AIA", aia_select(&ch)),
        ("A3", a3_select(&ch)),
        ("RAN", random_select(&ch, &mut selection_stream(0, 42))),
    ];
    for (name, s) in picks {
        let (h, g) = s.user_gains();
        let r = noma_rates(h, g, &p);
        println!(
            "{name:>4}: (i, m, k) = {:?}  strong = {:?}  R_sum = {:.4}  eta = {:.4}  ops = {}",
            s.one_based(),
            s.strong_user,
            r.r_sum,
            r.eta,
            s.op_count
        );
    }

    let (h, g) = oma_select(&ch);
    println!(" OMA: UE1 via BS {} / UE2 via BS {}  R_sum = {:.4}", h.row + 1, g.row + 1, oma_rates(h.value, g.value, &p).r_sum);
    Ok(())
}
