//! The exponential integral, the chi transform, and the multinomial expansion.

use noma_as::specfun::{chi, ei_continued_fraction, ei_series, enumerate_terms, expansion_value, expint_ei};

fn main() -> noma_as::Result<()> {
    for x in [-1e-6, -0.1, -1.0, -2.0, -5.0, -20.0, -100.0] {
        println!("Ei({x:>7}) = {:+.15e}", expint_ei(x)?);
    }
    println!("series vs continued fraction at -2: {:.3e}", (ei_series(-2.0) - ei_continued_fraction(-2.0)).abs());

    // chi(x) grows in magnitude like ln(rho)
    for rho in [1e6, 1e9, 1e12] {
        println!("chi(1; b=0.4, rho={rho:e}) = {:.6}", chi(1.0, 0.4, rho));
    }

    let terms = enumerate_terms(2, 2, 2, 1.0, 2.0)?;
    println!("(N-1, M, K) = (2, 2, 2): {} terms", terms.len());
    for t in terms.iter().take(5) {
        println!("  l = {:?}  C = {}  t = {:+}  xi = {}", t.composition, t.c_l, t.t_l, t.xi_l);
    }
    let x = 0.7;
    let direct = {
        let f = |omega: f64, n: i32| (1.0 - (-omega * x).exp()).powi(n);
        (1.0 - (1.0 - f(1.0, 2)) * (1.0 - f(2.0, 2))).powi(2)
    };
    println!("expansion at x = {x}: {:.15} (direct {:.15})", expansion_value(&terms, x), direct);
    Ok(())
}
