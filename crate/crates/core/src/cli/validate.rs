//! Built-in numerical self-check run by `noma-as validate`.
//!
//! Each check compares an implementation path against an independent reference:
//! brute-force selection, direct products of CDFs, 40-digit special-function
//! values or adaptive quadrature.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analysis::{pdf_mass, quadrature_avg_rate, GammaSDistribution, Kind};
use crate::link_model::{noma_rates, ChannelRealization, GainMatrix, ScenarioConfig, SystemParams};
use crate::selection::{a3_select, aia_select, exhaustive_search, random_select};
use crate::specfun::{
    ei_continued_fraction, ei_series, enumerate_terms_with, expansion_value, expint_ei, lambda_coeff, LambdaFn,
};

/// Ei(-1) to 20 digits.
const EI_MINUS_ONE: f64 = -0.219_383_934_395_520_273_68;

/// Implementation pieces under test. Swapping one lets a caller confirm that
/// the corresponding check actually detects a fault.
#[derive(Clone, Copy)]
pub struct Subject {
    pub lambda: LambdaFn,
    /// Folds one `[T1, T2, T3, T4]` contribution of the max-min-max closed form.
    pub combine_t_terms: fn(&[f64; 4]) -> f64,
}

impl Default for Subject {
    fn default() -> Self {
        Subject { lambda: lambda_coeff, combine_t_terms: |t| t[0] + t[1] + t[2] + t[3] }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn outcome(name: &'static str, passed: bool, detail: String) -> CheckOutcome {
    CheckOutcome { name, passed, detail }
}

fn random_channel(rng: &mut ChaCha8Rng, n: usize, m: usize, k: usize) -> ChannelRealization {
    let mut draw = |len: usize| (0..len).map(|_| -(-rng.gen::<f64>()).ln_1p()).collect::<Vec<_>>();
    let h = GainMatrix::from_vec(n, m, draw(n * m)).expect("valid gains");
    let g = GainMatrix::from_vec(n, k, draw(n * k)).expect("valid gains");
    ChannelRealization::new(h, g).expect("matching rows")
}

/// Index-level reference for max-min-max, written as plain loops.
fn brute_force_aia(ch: &ChannelRealization) -> (usize, usize, usize) {
    let mut best = (f64::NEG_INFINITY, 0, 0, 0);
    for i in 0..ch.n_bs() {
        let (mut hm, mut mi) = (f64::NEG_INFINITY, 0);
        for m in 0..ch.n_ue1() {
            if ch.h.get(i, m) > hm {
                (hm, mi) = (ch.h.get(i, m), m);
            }
        }
        let (mut gm, mut ki) = (f64::NEG_INFINITY, 0);
        for k in 0..ch.n_ue2() {
            if ch.g.get(i, k) > gm {
                (gm, ki) = (ch.g.get(i, k), k);
            }
        }
        if hm.min(gm) > best.0 {
            best = (hm.min(gm), i, mi, ki);
        }
    }
    (best.1, best.2, best.3)
}

/// Index-level reference for max-max-max: locate the global maximum, then the
/// other user's best antenna on that BS row.
fn brute_force_a3(ch: &ChannelRealization) -> (usize, usize, usize) {
    let mut best = (f64::NEG_INFINITY, 0, 0, true);
    for i in 0..ch.n_bs() {
        for m in 0..ch.n_ue1() {
            if ch.h.get(i, m) > best.0 {
                best = (ch.h.get(i, m), i, m, true);
            }
        }
        for k in 0..ch.n_ue2() {
            // strict: at equality the earlier row, or UE1 within a row, stays
            let v = ch.g.get(i, k);
            if v > best.0 {
                best = (v, i, k, false);
            }
        }
    }
    let (i, col, in_h) = (best.1, best.2, best.3);
    let other = |row: &[f64]| {
        let mut arg = 0;
        for (c, &v) in row.iter().enumerate() {
            if v > row[arg] {
                arg = c;
            }
        }
        arg
    };
    if in_h {
        (i, col, other(ch.g.row(i)))
    } else {
        (i, other(ch.h.row(i)), col)
    }
}

pub fn check_selection_oracles(realizations: usize, seed: u64) -> CheckOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for t in 0..realizations {
        let (n, m, k) = (rng.gen_range(1..=4), rng.gen_range(1..=4), rng.gen_range(1..=4));
        let ch = random_channel(&mut rng, n, m, k);
        let aia = aia_select(&ch);
        let a3 = a3_select(&ch);
        if (aia.bs, aia.ue1, aia.ue2) != brute_force_aia(&ch) {
            return outcome("selection_oracles", false, format!("max-min-max mismatch on realization {t}"));
        }
        if (a3.bs, a3.ue1, a3.ue2) != brute_force_a3(&ch) {
            return outcome("selection_oracles", false, format!("max-max-max mismatch on realization {t}"));
        }
        let global = ch.h.as_slice().iter().chain(ch.g.as_slice()).copied().fold(f64::NEG_INFINITY, f64::max);
        if a3.gamma_s != global {
            return outcome("selection_oracles", false, format!("max-max-max missed the global maximum on {t}"));
        }
    }
    outcome("selection_oracles", true, format!("{realizations} realizations"))
}

pub fn check_es_dominance(realizations: usize, seed: u64) -> CheckOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = SystemParams::derive(ScenarioConfig { d1: 1.0, d2: 1.0, ps_dbm: 20.0, sigma_dbm: 0.0, ..Default::default() })
        .expect("valid scenario");
    let mut violations = 0;
    for _ in 0..realizations {
        let (n, m, k) = (rng.gen_range(1..=4), rng.gen_range(1..=4), rng.gen_range(1..=4));
        let ch = random_channel(&mut rng, n, m, k);
        let rate = |s: crate::selection::SelectionResult| {
            let (h, g) = s.user_gains();
            noma_rates(h, g, &p).r_sum
        };
        let best = rate(exhaustive_search(&ch, &p));
        let ran = random_select(&ch, &mut rng);
        for r in [rate(aia_select(&ch)), rate(a3_select(&ch)), rate(ran)] {
            if r > best + 1e-12 {
                violations += 1;
            }
        }
    }
    outcome("es_dominance", violations == 0, format!("{violations} violations over {realizations} realizations"))
}

pub fn check_special_functions() -> CheckOutcome {
    let name = "special_functions";
    let ei1 = expint_ei(-1.0).unwrap_or(f64::NAN);
    if !((ei1 - EI_MINUS_ONE).abs() <= 1e-10) {
        return outcome(name, false, format!("Ei(-1) = {ei1}"));
    }
    let mut worst_overlap: f64 = 0.0;
    for i in 0..=40 {
        let x = -1.5 - 1.5 * i as f64 / 40.0;
        let (s, c) = (ei_series(x), ei_continued_fraction(x));
        worst_overlap = worst_overlap.max(((s - c) / c).abs());
    }
    if worst_overlap > 1e-10 {
        return outcome(name, false, format!("series/continued-fraction overlap gap {worst_overlap:e}"));
    }
    let mut worst_deriv: f64 = 0.0;
    for i in 0..20 {
        let x = -0.1 - 9.9 * (i as f64 + 0.5) / 20.0;
        let h = 1e-5 * x.abs();
        let fd = (expint_ei(x + h).unwrap() - expint_ei(x - h).unwrap()) / (2.0 * h);
        let exact = x.exp() / x;
        worst_deriv = worst_deriv.max(((fd - exact) / exact).abs());
    }
    let passed = worst_deriv <= 1e-6;
    outcome(name, passed, format!("overlap {worst_overlap:.2e}, derivative {worst_deriv:.2e}"))
}

pub fn check_expansion(subject: &Subject, seed: u64) -> CheckOutcome {
    let name = "expansion_correctness";
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for n in 1..=5usize {
        for m in 1..=3usize {
            for k in 1..=3usize {
                let (oh, og) = (rng.gen_range(0.2..3.0), rng.gen_range(0.2..3.0));
                let terms = match enumerate_terms_with(n - 1, m, k, oh, og, subject.lambda) {
                    Ok(t) => t,
                    Err(e) => return outcome(name, false, e.to_string()),
                };
                for _ in 0..5 {
                    let x: f64 = rng.gen_range(0.05..4.0);
                    // 1 - (1 - F_h^max)(1 - F_g^max), from the product forms
                    let fh = (-(-oh * x).exp_m1()).powi(m as i32);
                    let fg = (-(-og * x).exp_m1()).powi(k as i32);
                    let want = (1.0 - (1.0 - fh) * (1.0 - fg)).powi(n as i32 - 1);
                    let got = expansion_value(&terms, x);
                    // Relative to the term magnitudes, since the sum cancels near 0.
                    let magnitude: f64 = terms.iter().map(|t| (t.weight() * (-t.xi_l * x).exp()).abs()).sum();
                    worst = worst.max((got - want).abs() / magnitude.max(want.abs()));
                }
            }
        }
    }
    outcome(name, worst <= 1e-11, format!("worst scaled error {worst:.2e}"))
}

pub fn check_normalization() -> CheckOutcome {
    let name = "pdf_normalization";
    let mut worst: f64 = 0.0;
    for (n, m, k) in [(1, 1, 1), (2, 2, 2), (3, 3, 3), (4, 2, 2)] {
        let p = SystemParams::derive(ScenarioConfig { n_bs: n, n_ue1: m, n_ue2: k, ..Default::default() })
            .expect("valid scenario");
        for kind in [Kind::Aia, Kind::A3] {
            let d = match GammaSDistribution::new(&p, kind) {
                Ok(d) => d,
                Err(e) => return outcome(name, false, e.to_string()),
            };
            match pdf_mass(|x| d.pdf(x), d.scale()) {
                Ok(r) => worst = worst.max((r.value - 1.0).abs()),
                Err(e) => return outcome(name, false, e.to_string()),
            }
        }
    }
    outcome(name, worst <= 1e-8, format!("worst mass error {worst:.2e}"))
}

pub fn check_closed_forms(subject: &Subject, dims: &[(usize, usize, usize)], ps_dbm: &[f64]) -> CheckOutcome {
    let name = "closed_form_vs_quadrature";
    let mut worst: f64 = 0.0;
    for &(n, m, k) in dims {
        for &ps in ps_dbm {
            let p = match SystemParams::derive(ScenarioConfig { n_bs: n, n_ue1: m, n_ue2: k, ps_dbm: ps, ..Default::default() }) {
                Ok(p) => p,
                Err(e) => return outcome(name, false, e.to_string()),
            };
            for kind in [Kind::Aia, Kind::A3] {
                let closed = match kind {
                    Kind::Aia => GammaSDistribution::with_lambda(&p, kind, subject.lambda)
                        .and_then(|d| d.aia_terms())
                        .map(|t| t.total_with(subject.combine_t_terms)),
                    Kind::A3 => crate::analysis::avg_sum_rate_a3(&p),
                };
                let reference = GammaSDistribution::new(&p, kind).and_then(|d| quadrature_avg_rate(|x| d.pdf(x), &p));
                match (closed, reference) {
                    (Ok(c), Ok(q)) => worst = worst.max(((c - q.value) / q.value).abs()),
                    (Err(e), _) | (_, Err(e)) => return outcome(name, false, e.to_string()),
                }
            }
        }
    }
    outcome(name, worst <= 1e-6, format!("worst relative gap {worst:.2e}"))
}

/// Runs every check with the reduced sizes used by the command line.
pub fn run_all(subject: &Subject) -> Vec<CheckOutcome> {
    let dims: Vec<(usize, usize, usize)> = [(1, 1, 1), (2, 2, 2), (3, 2, 3), (3, 3, 3), (2, 3, 1)].to_vec();
    vec![
        check_selection_oracles(2_000, 11),
        check_es_dominance(10_000, 12),
        check_special_functions(),
        check_expansion(subject, 13),
        check_normalization(),
        check_closed_forms(subject, &dims, &[30.0, 60.0, 90.0]),
    ]
}
