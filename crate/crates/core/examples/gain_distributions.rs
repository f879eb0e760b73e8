//! Distribution of the selected strong gain: analytic CDF against sampled values.

use noma_as::analysis::{pdf_mass, GammaSDistribution, Kind};
use noma_as::link_model::{ScenarioConfig, SystemParams};
use noma_as::montecarlo::sample_realization;
use noma_as::selection::{a3_select, aia_select};

fn main() -> noma_as::Result<()> {
    let p = SystemParams::derive(ScenarioConfig { n_bs: 3, ..Default::default() })?;
    let samples = 50_000u64;
    for kind in [Kind::Aia, Kind::A3] {
        let d = GammaSDistribution::new(&p, kind)?;
        let mass = pdf_mass(|x| d.pdf(x), d.scale())?.value;
        let mut xs: Vec<f64> = (0..samples)
            .map(|t| {
                let ch = sample_realization(&p, t, 5);
                match kind {
                    Kind::Aia => aia_select(&ch).gamma_s,
                    Kind::A3 => a3_select(&ch).gamma_s,
                }
            })
            .collect();
        xs.sort_by(f64::total_cmp);
        let n = xs.len() as f64;
        let ks = xs
            .iter()
            .enumerate()
            .map(|(i, &x)| (d.cdf(x) - i as f64 / n).abs().max((d.cdf(x) - (i + 1) as f64 / n).abs()))
            .fold(0.0, f64::max);
        println!("{kind:?}: pdf mass {mass:.12}, KS distance {ks:.4} over {samples} draws");
        for q in [0.1, 0.5, 0.9] {
            let x = xs[(q * n) as usize];
            println!("  empirical {q:.1}-quantile {x:.4e}  analytic CDF there {:.4}", d.cdf(x));
        }
    }
    Ok(())
}
