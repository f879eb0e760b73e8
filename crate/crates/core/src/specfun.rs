//! Special functions and the combinatorial expansion behind the closed forms.

use crate::error::{Error, Result};

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Crossover between the power series and the continued fraction, in `|x|`.
pub const EI_SERIES_LIMIT: f64 = 2.0;

/// Largest integer magnitude represented exactly by an `f64`.
const EXACT_INT_LIMIT: f64 = 9_007_199_254_740_992.0;

/// Upper bound on the number of multinomial terms we are willing to enumerate.
pub const MAX_EXPANSION_TERMS: u128 = 1_000_000;

/// Neumaier compensated accumulator for sums with heavy cancellation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl std::iter::FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Convergent series `Ei(x) = gamma + ln|x| + sum x^n / (n n!)` for `x < 0`.
///
/// Near machine precision for `|x| <= 2`. The cancellation between the
/// terms costs about a digit per unit of `|x|` beyond that.
pub fn ei_series(x: f64) -> f64 {
    debug_assert!(x < 0.0);
    let mut acc = CompensatedSum::new();
    acc.add(EULER_GAMMA);
    acc.add((-x).ln());
    let mut power_over_fact = 1.0;
    for n in 1..500 {
        let nf = n as f64;
        power_over_fact *= x / nf;
        let term = power_over_fact / nf;
        acc.add(term);
        if term.abs() <= f64::EPSILON * 1e-3 * acc.value().abs() {
            break;
        }
    }
    acc.value()
}

/// `e^u E1(u)` for `u > 0` by the modified Lentz continued fraction.
///
/// Converges for every positive `u`, slowly when `u` is small.
pub fn scaled_e1_continued_fraction(u: f64) -> f64 {
    debug_assert!(u > 0.0);
    const TINY: f64 = 1e-300;
    let mut b = u + 1.0;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..10_000 {
        let an = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() <= 1e-16 {
            break;
        }
    }
    h
}

/// `Ei(x)` for `x < 0` by the continued fraction for `E1(-x)`.
pub fn ei_continued_fraction(x: f64) -> f64 {
    debug_assert!(x < 0.0);
    -scaled_e1_continued_fraction(-x) * x.exp()
}

/// Exponential integral `Ei(x)` on the negative axis.
pub fn expint_ei(x: f64) -> Result<f64> {
    if !(x < 0.0) {
        return Err(Error::Domain(format!("Ei is only provided for x < 0, got {x}")));
    }
    Ok(if -x <= EI_SERIES_LIMIT { ei_series(x) } else { ei_continued_fraction(x) })
}

/// `e^u Ei(-u)` for `u > 0` without forming `e^u` when `u` is large.
pub fn exp_ei_neg(u: f64) -> f64 {
    debug_assert!(u > 0.0);
    if u <= EI_SERIES_LIMIT {
        u.exp() * ei_series(-u)
    } else {
        -scaled_e1_continued_fraction(u)
    }
}

/// `chi(x) = e^{x/(b rho)} Ei(-x/(b rho))`, always negative.
pub fn chi(x: f64, b: f64, rho: f64) -> f64 {
    debug_assert!(x > 0.0 && b > 0.0 && rho > 0.0);
    exp_ei_neg(x / (b * rho))
}

/// Exact binomial coefficient, `None` on overflow.
pub fn binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step.
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

/// Signed binomial coefficient `(-1)^idx C(order, idx)`.
pub fn lambda_coeff(idx: usize, order: usize) -> Result<f64> {
    if idx > order {
        return Err(Error::Domain(format!("lambda index {idx} exceeds order {order}")));
    }
    let c = binomial(order as u64, idx as u64)
        .filter(|c| (*c as f64) <= EXACT_INT_LIMIT)
        .ok_or_else(|| Error::ExpansionTooLarge(format!("C({order}, {idx}) exceeds exact range")))?;
    let c = c as f64;
    Ok(if idx % 2 == 0 { c } else { -c })
}

/// One term `C_l t_l e^{-xi_l x}` of the multinomial expansion of
/// `[F(x)]^{N-1}`, where `F` is the CDF of a per-row minimum gain.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionTerm {
    pub c_l: u64,
    pub t_l: f64,
    pub xi_l: f64,
    /// `(l_0, l_11, l_12, ..., l_MK)`, pair slots in row-major `(i, j)` order.
    pub composition: Vec<u32>,
}

impl ExpansionTerm {
    /// `C_l t_l` as a float, exact by construction.
    pub fn weight(&self) -> f64 {
        self.c_l as f64 * self.t_l
    }
}

/// Signature of a signed-binomial provider, so alternative coefficient
/// sources can be checked against the same expansion machinery.
pub type LambdaFn = fn(usize, usize) -> Result<f64>;

/// Enumerates the expansion of `(1 - sum_{i,j} lambda_{i,M} lambda_{j,K} e^{-(i Omega_h + j Omega_g) x})^{N-1}`.
///
/// Compositions of `n_minus_1` into `MK + 1` parts are produced in descending
/// lexicographic order, starting from the term concentrated on `l_0`.
pub fn enumerate_terms(n_minus_1: usize, m: usize, k: usize, omega_h: f64, omega_g: f64) -> Result<Vec<ExpansionTerm>> {
    enumerate_terms_with(n_minus_1, m, k, omega_h, omega_g, lambda_coeff)
}

pub fn enumerate_terms_with(
    n_minus_1: usize,
    m: usize,
    k: usize,
    omega_h: f64,
    omega_g: f64,
    lambda: LambdaFn,
) -> Result<Vec<ExpansionTerm>> {
    if m == 0 || k == 0 {
        return Err(Error::InvalidParams("antenna counts must be positive".into()));
    }
    let slots = m * k;
    let count = binomial((n_minus_1 + slots) as u64, slots as u64)
        .filter(|c| *c <= MAX_EXPANSION_TERMS)
        .ok_or_else(|| {
            Error::ExpansionTooLarge(format!(
                "N-1={n_minus_1}, M={m}, K={k} needs more than {MAX_EXPANSION_TERMS} terms"
            ))
        })?;

    // Per-slot base weight -lambda_{i,M} lambda_{j,K} and rate i Omega_h + j Omega_g.
    let mut base = Vec::with_capacity(slots);
    let mut rate = Vec::with_capacity(slots);
    for i in 1..=m {
        for j in 1..=k {
            base.push(-lambda(i, m)? * lambda(j, k)?);
            rate.push(i as f64 * omega_h + j as f64 * omega_g);
        }
    }

    let mut terms = Vec::with_capacity(count as usize);
    let mut parts = vec![0u32; slots + 1];
    let mut err = None;
    compositions(n_minus_1 as u32, 0, &mut parts, &mut |parts| {
        if err.is_some() {
            return;
        }
        match build_term(parts, &base, &rate) {
            Ok(t) => terms.push(t),
            Err(e) => err = Some(e),
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    Ok(terms)
}

fn compositions(remaining: u32, slot: usize, parts: &mut [u32], visit: &mut impl FnMut(&[u32])) {
    if slot == parts.len() - 1 {
        parts[slot] = remaining;
        visit(parts);
        return;
    }
    for v in (0..=remaining).rev() {
        parts[slot] = v;
        compositions(remaining - v, slot + 1, parts, visit);
    }
}

fn build_term(parts: &[u32], base: &[f64], rate: &[f64]) -> Result<ExpansionTerm> {
    let too_large = || Error::ExpansionTooLarge(format!("term {parts:?} exceeds exact integer range"));
    let mut remaining: u64 = parts.iter().map(|&p| p as u64).sum();
    let mut c: u128 = 1;
    for &p in parts {
        c = c.checked_mul(binomial(remaining, p as u64).ok_or_else(too_large)?).ok_or_else(too_large)?;
        remaining -= p as u64;
    }
    let mut t = 1.0;
    let mut xi = 0.0;
    for ((&p, &w), &r) in parts[1..].iter().zip(base).zip(rate) {
        t *= w.powi(p as i32);
        xi += r * p as f64;
    }
    if c as f64 > EXACT_INT_LIMIT || (c as f64 * t).abs() > EXACT_INT_LIMIT {
        return Err(too_large());
    }
    Ok(ExpansionTerm { c_l: c as u64, t_l: t, xi_l: xi, composition: parts.to_vec() })
}

/// Evaluates `sum_l C_l t_l e^{-xi_l x}` with compensated summation.
pub fn expansion_value(terms: &[ExpansionTerm], x: f64) -> f64 {
    terms.iter().map(|t| t.weight() * (-t.xi_l * x).exp()).collect::<CompensatedSum>().value()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    // Reference values computed with 40-digit arithmetic.
    const EI_REF: [(f64, f64); 10] = [
        (-1e-8, -17.843465089050832566),
        (-0.1, -1.8229239584193906159),
        (-1.0, -0.21938393439552027368),
        (-2.5, -0.024914917870269735496),
        (-4.0, -0.0037793524098489064789),
        (-6.0, -0.0003600824521626586593),
        (-6.5, -0.00020342986683939819737),
        (-10.0, -4.1569689296853242774e-6),
        (-20.0, -9.8355252906498816904e-11),
        (-40.0, -1.0367732614516569722e-19),
    ];

    #[test]
    fn ei_matches_reference_values() {
        for (x, want) in EI_REF {
            let got = expint_ei(x).unwrap();
            assert_relative_eq!(got, want, max_relative = 1e-12);
        }
    }

    #[test]
    fn ei_rejects_nonnegative() {
        assert!(expint_ei(0.0).is_err());
        assert!(expint_ei(1.0).is_err());
        assert!(expint_ei(f64::NAN).is_err());
    }

    #[test]
    fn ei_minus_forty_bracket() {
        let e = (-40f64).exp() / 40.0;
        let v = expint_ei(-40.0).unwrap();
        assert!(v > -e && v < -e * (1.0 - 1.0 / 40.0) * 0.999);
    }

    #[test]
    fn ei_small_argument_limit() {
        for x in [-1e-6, -1e-9, -1e-12] {
            let v = expint_ei(x).unwrap();
            assert!((v - (-x).ln() - EULER_GAMMA).abs() < 2.0 * -x);
        }
    }

    #[test]
    fn chi_examples() {
        let (b, rho) = (0.4, 25.0);
        assert_relative_eq!(chi(b * rho, b, rho), -0.59634736232319407434, max_relative = 1e-12);
        // large argument through the fused branch, no overflow
        assert_relative_eq!(chi(700.0 * b * rho, b, rho), -0.0014265364183008866918, max_relative = 1e-12);
        let mut prev = f64::NEG_INFINITY;
        for rho in [1e2, 1e4, 1e6, 1e9, 1e12] {
            let v = chi(1.0, 0.4, rho);
            assert!(v < 0.0);
            assert!(v.abs() > prev.abs() || prev == f64::NEG_INFINITY);
            prev = v;
        }
    }

    #[test]
    fn chi_decreasing_in_x() {
        let (b, rho) = (0.3, 50.0);
        let mut prev = chi(1e-3, b, rho);
        for i in 1..200 {
            let v = chi(1e-3 + i as f64 * 0.5, b, rho);
            assert!(v > prev && v < 0.0);
            prev = v;
        }
    }

    #[test]
    fn lambda_examples() {
        for m in 0..10 {
            assert_eq!(lambda_coeff(0, m).unwrap(), 1.0);
        }
        assert_eq!(lambda_coeff(1, 2).unwrap(), -2.0);
        assert_eq!(lambda_coeff(2, 2).unwrap(), 1.0);
        for m in 1..30 {
            let s: f64 = (0..=m).map(|i| lambda_coeff(i, m).unwrap()).sum();
            assert_eq!(s, 0.0);
        }
        assert!(lambda_coeff(3, 2).is_err());
    }

    #[test]
    fn single_bs_antenna_expansion() {
        let t = enumerate_terms(0, 2, 3, 1.0, 2.0).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!((t[0].c_l, t[0].t_l, t[0].xi_l), (1, 1.0, 0.0));
    }

    #[test]
    fn two_by_two_hand_expansion() {
        let (oh, og) = (3.0, 7.0);
        let t = enumerate_terms(1, 2, 2, oh, og).unwrap();
        assert_eq!(t.len(), 5);
        assert_eq!((t[0].c_l, t[0].t_l, t[0].xi_l), (1, 1.0, 0.0));
        let expected = [(-4.0, 1, 1), (2.0, 1, 2), (2.0, 2, 1), (-1.0, 2, 2)];
        for (term, (tl, i, j)) in t[1..].iter().zip(expected) {
            assert_eq!(term.c_l, 1);
            assert_eq!(term.t_l, tl);
            assert_eq!(term.xi_l, i as f64 * oh + j as f64 * og);
        }
    }

    #[test]
    fn weights_vanish_at_origin() {
        for n in 2..6 {
            let t = enumerate_terms(n - 1, 2, 3, 1.0, 1.0).unwrap();
            let s: CompensatedSum = t.iter().map(|t| t.weight()).collect();
            assert_eq!(s.value(), 0.0);
        }
    }

    #[test]
    fn oversized_expansion_is_rejected() {
        let err = enumerate_terms(15, 16, 16, 1.0, 1.0).unwrap_err();
        assert!(matches!(err, Error::ExpansionTooLarge(_)));
    }

    #[test]
    fn compensated_sum_recovers_cancellation() {
        let s: CompensatedSum = [1e16, 1.0, -1e16].into_iter().collect();
        assert_eq!(s.value(), 1.0);
    }
}
