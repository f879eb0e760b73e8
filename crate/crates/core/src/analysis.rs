//! Distribution of the selected strong gain and high-SNR average sum-rates.
//!
//! Both heuristics share the row-maximum distributions
//! `F(x) = (1 - e^{-Omega x})^M`. The max-min-max selector keeps the row whose
//! smaller maximum wins, so its strong gain density needs the multinomial
//! expansion from [`crate::specfun`]. The max-max-max strong gain is simply the
//! global maximum of both matrices.
//!
//! At high SNR the weak-user rate is replaced by its ceiling `log2(1/b)`, and the
//! average strong-user rate is integrated in closed form through `chi`.

use std::f64::consts::LN_2;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::link_model::SystemParams;
use crate::quadrature::{integrate_semi_infinite, QuadOptions, QuadResult};
use crate::specfun::{chi, enumerate_terms_with, lambda_coeff, CompensatedSum, ExpansionTerm, LambdaFn};

/// Closed forms whose estimated rounding error exceeds this are refused.
pub const MAX_CLOSED_FORM_ROUNDING: f64 = 1e-6;

/// `(1 - e^{-omega x})^count`, the CDF of the largest of `count` i.i.d. exponential gains.
pub fn cdf_max_exp(x: f64, omega: f64, count: usize) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    (-(-omega * x).exp_m1()).powi(count as i32)
}

/// Density matching [`cdf_max_exp`].
pub fn pdf_max_exp(x: f64, omega: f64, count: usize) -> f64 {
    if x < 0.0 {
        return 0.0;
    }
    let e = (-omega * x).exp();
    count as f64 * omega * e * (-(-omega * x).exp_m1()).powi(count as i32 - 1)
}

/// `sum_{i=0}^{count} lambda_{i,count} e^{-i omega x}`.
pub fn cdf_max_exp_expanded(x: f64, omega: f64, count: usize) -> Result<f64> {
    let mut acc = CompensatedSum::new();
    for i in 0..=count {
        acc.add(lambda_coeff(i, count)? * (-(i as f64) * omega * x).exp());
    }
    Ok(acc.value())
}

/// `-sum_{i=1}^{count} i omega lambda_{i,count} e^{-i omega x}`.
pub fn pdf_max_exp_expanded(x: f64, omega: f64, count: usize) -> Result<f64> {
    let mut acc = CompensatedSum::new();
    for i in 1..=count {
        let r = i as f64 * omega;
        acc.add(-r * lambda_coeff(i, count)? * (-r * x).exp());
    }
    Ok(acc.value())
}

pub fn cdf_row_max_h(x: f64, p: &SystemParams) -> f64 {
    cdf_max_exp(x, p.omega_h(), p.n_ue1())
}

pub fn cdf_row_max_g(x: f64, p: &SystemParams) -> f64 {
    cdf_max_exp(x, p.omega_g(), p.n_ue2())
}

pub fn pdf_row_max_h(x: f64, p: &SystemParams) -> f64 {
    pdf_max_exp(x, p.omega_h(), p.n_ue1())
}

pub fn pdf_row_max_g(x: f64, p: &SystemParams) -> f64 {
    pdf_max_exp(x, p.omega_g(), p.n_ue2())
}

/// CDF of the smaller of the two row maxima, in signed-binomial form.
pub fn cdf_gamma_i_w(x: f64, p: &SystemParams) -> Result<f64> {
    let (m, k) = (p.n_ue1(), p.n_ue2());
    let mut acc = CompensatedSum::new();
    acc.add(1.0);
    for i in 1..=m {
        for j in 1..=k {
            let rate = i as f64 * p.omega_h() + j as f64 * p.omega_g();
            acc.add(-lambda_coeff(i, m)? * lambda_coeff(j, k)? * (-rate * x).exp());
        }
    }
    Ok(acc.value())
}

/// Which heuristic's strong-gain distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Kind {
    Aia,
    A3,
}

/// Per-(i, j) data of the max-min-max density.
#[derive(Debug, Clone)]
struct PairTerm {
    mu_h: f64,
    mu_g: f64,
    zeta: f64,
}

/// Closed-form distribution of the selected strong gain.
#[derive(Debug, Clone)]
pub struct GammaSDistribution {
    params: SystemParams,
    kind: Kind,
    pairs: Vec<PairTerm>,
    terms: Vec<ExpansionTerm>,
}

impl GammaSDistribution {
    pub fn new(params: &SystemParams, kind: Kind) -> Result<Self> {
        Self::with_lambda(params, kind, lambda_coeff)
    }

    /// Builds the distribution with an alternative signed-binomial source.
    pub fn with_lambda(params: &SystemParams, kind: Kind, lambda: LambdaFn) -> Result<Self> {
        let (n, m, k) = (params.n_bs(), params.n_ue1(), params.n_ue2());
        let (mut pairs, mut terms) = (Vec::new(), Vec::new());
        if kind == Kind::Aia {
            terms = enumerate_terms_with(n - 1, m, k, params.omega_h(), params.omega_g(), lambda)?;
            for i in 1..=m {
                for j in 1..=k {
                    let (mu_h, mu_g) = (i as f64 * params.omega_h(), j as f64 * params.omega_g());
                    let zeta = n as f64 * mu_h * mu_g * lambda(i, m)? * lambda(j, k)?;
                    pairs.push(PairTerm { mu_h, mu_g, zeta });
                }
            }
        }
        Ok(GammaSDistribution { params: *params, kind, pairs, terms })
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    /// Characteristic length of the density, used to map `[0, inf)` for quadrature.
    pub fn scale(&self) -> f64 {
        1.0 / self.params.omega_h().min(self.params.omega_g())
    }

    pub fn pdf(&self, x: f64) -> f64 {
        match self.kind {
            Kind::Aia => self.pdf_aia(x),
            Kind::A3 => self.pdf_a3_product(x),
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match self.kind {
            Kind::Aia => self.cdf_aia(x),
            Kind::A3 => {
                let p = &self.params;
                cdf_max_exp(x, p.omega_h(), p.n_bs() * p.n_ue1()) * cdf_max_exp(x, p.omega_g(), p.n_bs() * p.n_ue2())
            }
        }
    }

    fn single_row(&self) -> bool {
        self.params.n_bs() == 1
    }

    /// Density of `max(h_max, g_max)` for one row, the whole answer when N = 1.
    fn pdf_single_row(&self, x: f64) -> f64 {
        let p = &self.params;
        pdf_row_max_h(x, p) * cdf_row_max_g(x, p) + pdf_row_max_g(x, p) * cdf_row_max_h(x, p)
    }

    fn pdf_aia(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        // psi(mu1, mu2) = e^{-mu1 x} ((e^{-mu2 x} - 1)/mu2 - (e^{-(mu2+xi) x} - 1)/(mu2 + xi))
        let psi = |mu1: f64, mu2: f64, xi: f64| {
            (-mu1 * x).exp() * ((-mu2 * x).exp_m1() / mu2 - (-(mu2 + xi) * x).exp_m1() / (mu2 + xi))
        };
        let mut acc = CompensatedSum::new();
        for pt in &self.pairs {
            for t in &self.terms {
                if t.xi_l == 0.0 {
                    continue;
                }
                acc.add(t.weight() * pt.zeta * (psi(pt.mu_h, pt.mu_g, t.xi_l) + psi(pt.mu_g, pt.mu_h, t.xi_l)));
            }
        }
        // With a single BS antenna the competing-row CDF is identically one and
        // every psi vanishes; the density is that of the row's larger maximum.
        if self.single_row() {
            acc.add(self.pdf_single_row(x));
        }
        acc.value()
    }

    fn cdf_aia(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        // integral over [0, x] of e^{-r t}
        let e = |r: f64| -(-r * x).exp_m1() / r;
        let big_psi = |mu1: f64, mu2: f64, xi: f64| {
            e(mu1 + mu2) / mu2 - xi * e(mu1) / (mu2 * (mu2 + xi)) - e(mu1 + mu2 + xi) / (mu2 + xi)
        };
        let mut acc = CompensatedSum::new();
        for pt in &self.pairs {
            for t in &self.terms {
                if t.xi_l == 0.0 {
                    continue;
                }
                acc.add(t.weight() * pt.zeta * (big_psi(pt.mu_h, pt.mu_g, t.xi_l) + big_psi(pt.mu_g, pt.mu_h, t.xi_l)));
            }
        }
        if self.single_row() {
            acc.add(cdf_row_max_h(x, &self.params) * cdf_row_max_g(x, &self.params));
        }
        acc.value()
    }

    /// Derivative of `(1 - e^{-Omega_h x})^{NM} (1 - e^{-Omega_g x})^{NK}`.
    pub fn pdf_a3_product(&self, x: f64) -> f64 {
        let p = &self.params;
        let (nm, nk) = (p.n_bs() * p.n_ue1(), p.n_bs() * p.n_ue2());
        pdf_max_exp(x, p.omega_h(), nm) * cdf_max_exp(x, p.omega_g(), nk)
            + pdf_max_exp(x, p.omega_g(), nk) * cdf_max_exp(x, p.omega_h(), nm)
    }

    /// Signed-binomial double sum for the max-max-max density.
    pub fn pdf_a3_expanded(&self, x: f64) -> Result<f64> {
        let p = &self.params;
        let (nm, nk) = (p.n_bs() * p.n_ue1(), p.n_bs() * p.n_ue2());
        let mut acc = CompensatedSum::new();
        for i in 1..=nm {
            let mu_h = i as f64 * p.omega_h();
            let li = lambda_coeff(i, nm)?;
            for j in 1..=nk {
                let mu_g = j as f64 * p.omega_g();
                let w = li * lambda_coeff(j, nk)?;
                acc.add(w * mu_h * (-mu_h * x).exp());
                acc.add(w * mu_g * (-mu_g * x).exp());
                acc.add(-w * (mu_h + mu_g) * (-(mu_h + mu_g) * x).exp());
            }
        }
        Ok(acc.value())
    }

    /// High-SNR closed-form average sum-rate for this selector.
    pub fn avg_sum_rate(&self) -> Result<f64> {
        match self.kind {
            Kind::Aia => {
                let terms = self.aia_terms()?;
                if terms.rounding_estimate() > MAX_CLOSED_FORM_ROUNDING {
                    return Err(Error::ExpansionTooLarge(format!(
                        "closed form over {} terms is ill-conditioned in double precision",
                        terms.contributions.len()
                    )));
                }
                Ok(terms.total())
            }
            Kind::A3 => avg_sum_rate_a3(&self.params),
        }
    }

    /// The closed form decomposed into its per-(i, j, l) contributions.
    pub fn aia_terms(&self) -> Result<AiaTerms> {
        if self.kind != Kind::Aia {
            return Err(Error::InvalidParams("term decomposition exists for the max-min-max selector only".into()));
        }
        let p = &self.params;
        let (b, rho) = (p.b(), p.rho());
        let c = |x: f64| chi(x, b, rho);
        let n = p.n_bs() as f64;
        let mut contributions = Vec::with_capacity(self.pairs.len() * self.terms.len());
        for pt in &self.pairs {
            let zeta_t = pt.zeta / (pt.mu_h * pt.mu_g);
            debug_assert!((zeta_t / n).fract() == 0.0);
            let (chi_h, chi_g, chi_hg) = (c(pt.mu_h), c(pt.mu_g), c(pt.mu_h + pt.mu_g));
            for t in &self.terms {
                let xi = t.xi_l;
                let phi_i = pt.mu_h + xi;
                let phi_j = pt.mu_g + xi;
                let phi_1 = pt.mu_h + pt.mu_g + xi;
                let phi_2 = pt.mu_h + pt.mu_g + 2.0 * xi;
                let t1 = xi * zeta_t / phi_i * chi_g;
                let t2 = xi * zeta_t / phi_j * chi_h;
                let t3 = pt.zeta * phi_2 * c(phi_1) / (phi_i * phi_j * phi_1);
                let t4 = -zeta_t * chi_hg;
                let w = t.weight() / LN_2;
                contributions.push([w * t1, w * t2, w * t3, w * t4]);
            }
        }
        let mut base = (1.0 / b).log2();
        if self.single_row() {
            base += a3_chi_sum(p, p.n_ue1(), p.n_ue2())?;
        }
        Ok(AiaTerms { base, contributions })
    }
}

/// Max-min-max closed form split into a constant and the `T1..T4` contributions
/// of every `(i, j, l)` triple, each already weighted by `C_l t_l / ln 2`.
#[derive(Debug, Clone)]
pub struct AiaTerms {
    /// `log2(1/b)`, plus the single-row correction when N = 1.
    pub base: f64,
    pub contributions: Vec<[f64; 4]>,
}

impl AiaTerms {
    pub fn total(&self) -> f64 {
        self.total_with(|t| t.iter().sum())
    }

    /// Sums the contributions after combining each `[T1, T2, T3, T4]` with `combine`.
    pub fn total_with(&self, combine: impl Fn(&[f64; 4]) -> f64) -> f64 {
        let mut acc = CompensatedSum::new();
        acc.add(self.base);
        for c in &self.contributions {
            acc.add(combine(c));
        }
        acc.value()
    }

    /// Estimated relative rounding error of [`AiaTerms::total`].
    pub fn rounding_estimate(&self) -> f64 {
        let mag: f64 = self.contributions.iter().flatten().map(|v| v.abs()).sum();
        f64::EPSILON * mag / self.total().abs()
    }
}

/// `(1/ln 2) sum_{i<=nm} sum_{j<=nk} lambda lambda (chi(i Oh + j Og) - chi(i Oh) - chi(j Og))`.
fn a3_chi_sum(p: &SystemParams, nm: usize, nk: usize) -> Result<f64> {
    let (b, rho) = (p.b(), p.rho());
    let chi_h: Vec<f64> = (1..=nm).map(|i| chi(i as f64 * p.omega_h(), b, rho)).collect();
    let chi_g: Vec<f64> = (1..=nk).map(|j| chi(j as f64 * p.omega_g(), b, rho)).collect();
    let mut acc = CompensatedSum::new();
    let mut magnitude = 0.0;
    for i in 1..=nm {
        let li = lambda_coeff(i, nm)?;
        for j in 1..=nk {
            let w = li * lambda_coeff(j, nk)?;
            let joint = chi(i as f64 * p.omega_h() + j as f64 * p.omega_g(), b, rho);
            for v in [w * joint, -w * chi_h[i - 1], -w * chi_g[j - 1]] {
                acc.add(v);
                magnitude += v.abs();
            }
        }
    }
    let value = acc.value() / LN_2;
    if f64::EPSILON * magnitude / LN_2 > MAX_CLOSED_FORM_ROUNDING * value.abs().max(1.0) {
        return Err(Error::ExpansionTooLarge(format!(
            "signed-binomial sum over {nm}x{nk} terms is ill-conditioned in double precision"
        )));
    }
    Ok(value)
}

/// Strong-gain density of the max-min-max selector.
pub fn pdf_gamma_s_aia(x: f64, p: &SystemParams) -> Result<f64> {
    Ok(GammaSDistribution::new(p, Kind::Aia)?.pdf(x))
}

/// Strong-gain density of the max-max-max selector (product form).
pub fn pdf_gamma_s_a3(x: f64, p: &SystemParams) -> f64 {
    let (nm, nk) = (p.n_bs() * p.n_ue1(), p.n_bs() * p.n_ue2());
    pdf_max_exp(x, p.omega_h(), nm) * cdf_max_exp(x, p.omega_g(), nk)
        + pdf_max_exp(x, p.omega_g(), nk) * cdf_max_exp(x, p.omega_h(), nm)
}

/// High-SNR average sum-rate of the max-min-max selector.
pub fn avg_sum_rate_aia(p: &SystemParams) -> Result<f64> {
    GammaSDistribution::new(p, Kind::Aia)?.avg_sum_rate()
}

/// High-SNR average sum-rate of the max-max-max selector.
pub fn avg_sum_rate_a3(p: &SystemParams) -> Result<f64> {
    Ok((1.0 / p.b()).log2() + a3_chi_sum(p, p.n_bs() * p.n_ue1(), p.n_bs() * p.n_ue2())?)
}

/// Validity of the weak-rate ceiling used by the closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SnrGuard {
    /// `rho b E[min(h, g)]` for a single link pair.
    pub margin: f64,
    pub valid: bool,
}

/// Below this margin the `log2(1/b)` weak-rate ceiling is a poor approximation.
pub const SNR_GUARD_THRESHOLD: f64 = 100.0;

/// Flags operating points where the high-SNR closed forms should not be trusted.
///
/// Uses the mean weak gain of a single entry pair, `1/(Omega_h + Omega_g)`, which
/// never exceeds the mean weak gain after selection.
pub fn snr_guard(p: &SystemParams) -> SnrGuard {
    let margin = p.rho() * p.b() / (p.omega_h() + p.omega_g());
    SnrGuard { margin, valid: margin >= SNR_GUARD_THRESHOLD }
}

/// `int_0^inf log2(1 + b_rho x) pdf(x) dx` by adaptive quadrature.
pub fn quadrature_log_rate(pdf: impl Fn(f64) -> f64, b_rho: f64, scale: f64) -> Result<QuadResult> {
    let opts = QuadOptions { abs_tol: 1e-10, rel_tol: 1e-12, max_intervals: 1000 };
    integrate_semi_infinite(|x| (b_rho * x).ln_1p() / LN_2 * pdf(x), scale, opts)
}

/// Quadrature counterpart of the closed forms:
/// `int_0^inf log2(1 + b rho x) pdf(x) dx + log2(1/b)`.
pub fn quadrature_avg_rate(pdf: impl Fn(f64) -> f64, p: &SystemParams) -> Result<QuadResult> {
    let scale = 1.0 / p.omega_h().min(p.omega_g());
    let offset = (1.0 / p.b()).log2();
    match quadrature_log_rate(pdf, p.b() * p.rho(), scale) {
        Ok(mut r) => {
            r.value += offset;
            Ok(r)
        }
        Err(Error::NoConvergence { estimate, error }) => Err(Error::NoConvergence { estimate: estimate + offset, error }),
        Err(e) => Err(e),
    }
}

/// `int_0^inf pdf(x) dx`.
pub fn pdf_mass(pdf: impl Fn(f64) -> f64, scale: f64) -> Result<QuadResult> {
    let opts = QuadOptions { abs_tol: 1e-12, rel_tol: 1e-13, max_intervals: 8000 };
    integrate_semi_infinite(pdf, scale, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::link_model::ScenarioConfig;
    use approx::assert_relative_eq;

    fn params(n: usize, m: usize, k: usize, ps_dbm: f64) -> SystemParams {
        SystemParams::derive(ScenarioConfig { n_bs: n, n_ue1: m, n_ue2: k, ps_dbm, ..Default::default() }).unwrap()
    }

    fn unit(n: usize, m: usize, k: usize) -> SystemParams {
        SystemParams::derive(ScenarioConfig { n_bs: n, n_ue1: m, n_ue2: k, d1: 1.0, d2: 1.0, ..Default::default() })
            .unwrap()
    }

    #[test]
    fn row_max_examples() {
        let p = unit(2, 2, 2);
        assert_eq!(cdf_row_max_h(0.0, &p), 0.0);
        assert_relative_eq!(cdf_row_max_h(60.0, &p), 1.0, max_relative = 1e-15);
        assert_relative_eq!(cdf_row_max_h(1.0, &p), 0.399576, epsilon = 1e-6);
        let p1 = unit(2, 1, 1);
        for x in [0.1, 0.7, 3.0] {
            assert_relative_eq!(cdf_row_max_h(x, &p1), 1.0 - (-x).exp(), max_relative = 1e-14);
            assert_relative_eq!(pdf_row_max_g(x, &p1), (-x).exp(), max_relative = 1e-14);
        }
    }

    #[test]
    fn row_max_forms_agree() {
        for count in 1..8 {
            for x in [1e-3, 0.1, 0.5, 2.0, 9.0] {
                let omega = 1.7;
                assert_relative_eq!(
                    cdf_max_exp(x, omega, count),
                    cdf_max_exp_expanded(x, omega, count).unwrap(),
                    epsilon = 1e-13
                );
                assert_relative_eq!(
                    pdf_max_exp(x, omega, count),
                    pdf_max_exp_expanded(x, omega, count).unwrap(),
                    epsilon = 1e-12
                );
            }
        }
    }

    #[test]
    fn gamma_i_w_examples() {
        let p = unit(2, 1, 1);
        assert_eq!(cdf_gamma_i_w(0.0, &p).unwrap(), 0.0);
        assert_relative_eq!(cdf_gamma_i_w(1.0, &p).unwrap(), 0.864665, epsilon = 1e-6);
    }

    #[test]
    fn single_antenna_density_is_max_of_two_exponentials() {
        let p = SystemParams::derive(ScenarioConfig { n_bs: 1, n_ue1: 1, n_ue2: 1, d1: 1.0, d2: 1.5, ..Default::default() })
            .unwrap();
        let (oh, og) = (p.omega_h(), p.omega_g());
        let aia = GammaSDistribution::new(&p, Kind::Aia).unwrap();
        let a3 = GammaSDistribution::new(&p, Kind::A3).unwrap();
        for x in [0.01, 0.2, 1.0, 4.0] {
            let want = oh * (-oh * x).exp() + og * (-og * x).exp() - (oh + og) * (-(oh + og) * x).exp();
            assert_relative_eq!(aia.pdf(x), want, max_relative = 1e-12);
            assert_relative_eq!(a3.pdf(x), want, max_relative = 1e-12);
        }
        assert_relative_eq!(
            avg_sum_rate_aia(&p).unwrap(),
            avg_sum_rate_a3(&p).unwrap(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn quadrature_matches_chi_identity() {
        // b rho = 1: int log2(1 + x) e^{-x} dx = -chi(1) / ln 2
        let r = quadrature_log_rate(|x| (-x).exp(), 1.0, 1.0).unwrap();
        assert_relative_eq!(r.value, -chi(1.0, 1.0, 1.0) / LN_2, max_relative = 1e-11);
        assert_relative_eq!(r.value, 0.86034, epsilon = 1e-5);
    }

    #[test]
    fn quadrature_narrow_density() {
        let p = params(2, 2, 2, 20.0);
        let (x0, w) = (2e-5, 1e-9);
        let bump = |x: f64| (-(x - x0).powi(2) / (2.0 * w * w)).exp() / (w * (2.0 * std::f64::consts::PI).sqrt());
        let want = (1.0 + p.b() * p.rho() * x0).log2() + (1.0 / p.b()).log2();
        let opts = QuadOptions { abs_tol: 1e-10, rel_tol: 1e-12, max_intervals: 8000 };
        let got = crate::quadrature::integrate(|x| (p.b() * p.rho() * x).ln_1p() / LN_2 * bump(x), x0 - 20.0 * w, x0 + 20.0 * w, opts)
            .unwrap()
            .value
            + (1.0 / p.b()).log2();
        assert_relative_eq!(got, want, max_relative = 1e-6);
        let mass = pdf_mass(|x| (-x).exp(), 1.0).unwrap().value;
        assert_relative_eq!(mass, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn closed_form_matches_quadrature_at_reference_point() {
        let p = params(2, 2, 2, 30.0);
        for kind in [Kind::Aia, Kind::A3] {
            let d = GammaSDistribution::new(&p, kind).unwrap();
            let closed = d.avg_sum_rate().unwrap();
            let quad = quadrature_avg_rate(|x| d.pdf(x), &p).unwrap().value;
            assert_relative_eq!(closed, quad, max_relative = 1e-6);
        }
    }

    #[test]
    fn densities_normalise() {
        for (n, m, k) in [(1, 1, 1), (2, 2, 2), (3, 2, 3), (3, 3, 3)] {
            let p = params(n, m, k, 30.0);
            for kind in [Kind::Aia, Kind::A3] {
                let d = GammaSDistribution::new(&p, kind).unwrap();
                let mass = pdf_mass(|x| d.pdf(x), d.scale()).unwrap().value;
                assert!((mass - 1.0).abs() <= 1e-8, "{kind:?} {n}{m}{k}: {mass}");
                assert_relative_eq!(d.cdf(1.0), 1.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn a3_density_forms_agree() {
        let p = params(3, 2, 3, 30.0);
        let d = GammaSDistribution::new(&p, Kind::A3).unwrap();
        for i in 1..200 {
            let x = i as f64 * 5e-6;
            let a = d.pdf_a3_product(x);
            let b = d.pdf_a3_expanded(x).unwrap();
            assert!((a - b).abs() <= 1e-9 * a.abs().max(1.0), "{x}: {a} vs {b}");
        }
    }

    #[test]
    fn a3_beats_aia_at_high_snr() {
        for n in 1..=4 {
            let p = params(n, 2, 2, 30.0);
            assert!(avg_sum_rate_a3(&p).unwrap() >= avg_sum_rate_aia(&p).unwrap() - 1e-12);
        }
    }

    #[test]
    fn decade_of_snr_adds_log2_ten() {
        let lo = params(2, 2, 2, 40.0);
        let hi = params(2, 2, 2, 50.0);
        for f in [avg_sum_rate_aia, avg_sum_rate_a3] {
            let slope = f(&hi).unwrap() - f(&lo).unwrap();
            assert!((slope / 10f64.log2() - 1.0).abs() <= 0.05, "{slope}");
        }
    }

    #[test]
    fn guard_flags_low_snr() {
        assert!(!snr_guard(&params(2, 2, 2, 0.0)).valid);
        assert!(snr_guard(&params(2, 2, 2, 30.0)).valid);
    }

    #[test]
    fn ill_conditioned_a3_sum_is_refused() {
        let p = params(16, 16, 16, 30.0);
        assert!(matches!(avg_sum_rate_a3(&p), Err(Error::ExpansionTooLarge(_))));
    }
}
