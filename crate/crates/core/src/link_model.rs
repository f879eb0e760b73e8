//! Scenario parameters and the achievable-rate model of the two-user downlink.
//!
//! All powers enter in dBm and are converted once by [`SystemParams::derive`];
//! everything downstream works with the linear transmit SNR `rho`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Raw scenario constants, before validation and derivation.
///
/// `Default` reproduces the two-antenna reference scenario: N = M = K = 2,
/// d1 = 30 m, d2 = 100 m, path-loss exponent 3, b = 0.4, noise -70 dBm and
/// 20 dBm transmit power.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    pub n_bs: usize,
    pub n_ue1: usize,
    pub n_ue2: usize,
    pub d1: f64,
    pub d2: f64,
    pub alpha: f64,
    pub b: f64,
    pub ps_dbm: f64,
    pub sigma_dbm: f64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            n_bs: 2,
            n_ue1: 2,
            n_ue2: 2,
            d1: 30.0,
            d2: 100.0,
            alpha: 3.0,
            b: 0.4,
            ps_dbm: 20.0,
            sigma_dbm: -70.0,
        }
    }
}

/// Validated scenario with derived rate parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SystemParams {
    config: ScenarioConfig,
    a: f64,
    rho: f64,
    omega_h: f64,
    omega_g: f64,
}

impl SystemParams {
    pub fn derive(config: ScenarioConfig) -> Result<Self> {
        if config.n_bs == 0 || config.n_ue1 == 0 || config.n_ue2 == 0 {
            return Err(Error::InvalidParams(format!(
                "antenna counts must be positive, got N={} M={} K={}",
                config.n_bs, config.n_ue1, config.n_ue2
            )));
        }
        for (name, v) in [("d1", config.d1), ("d2", config.d2), ("alpha", config.alpha)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParams(format!("{name} must be positive and finite, got {v}")));
            }
        }
        if !(config.b > 0.0 && config.b < 0.5) {
            return Err(Error::PowerSplit { b: config.b });
        }
        if !config.ps_dbm.is_finite() || !config.sigma_dbm.is_finite() {
            return Err(Error::InvalidParams("powers must be finite".into()));
        }
        Ok(SystemParams {
            config,
            a: 1.0 - config.b,
            rho: db_to_linear(config.ps_dbm - config.sigma_dbm),
            omega_h: config.d1.powf(config.alpha),
            omega_g: config.d2.powf(config.alpha),
        })
    }

    /// Copy of `self` with a different configuration, re-validated.
    pub fn with(&self, f: impl FnOnce(&mut ScenarioConfig)) -> Result<Self> {
        let mut config = self.config;
        f(&mut config);
        Self::derive(config)
    }

    pub fn config(&self) -> &ScenarioConfig {
        &self.config
    }
    pub fn n_bs(&self) -> usize {
        self.config.n_bs
    }
    pub fn n_ue1(&self) -> usize {
        self.config.n_ue1
    }
    pub fn n_ue2(&self) -> usize {
        self.config.n_ue2
    }
    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.config.b
    }
    /// Linear transmit SNR.
    pub fn rho(&self) -> f64 {
        self.rho
    }
    /// Rate of the exponential distribution of every `h` entry (1 / E[h]).
    pub fn omega_h(&self) -> f64 {
        self.omega_h
    }
    /// Rate of the exponential distribution of every `g` entry (1 / E[g]).
    pub fn omega_g(&self) -> f64 {
        self.omega_g
    }
}

impl Default for SystemParams {
    fn default() -> Self {
        Self::derive(ScenarioConfig::default()).expect("default scenario is valid")
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Dense row-major matrix of nonnegative squared channel magnitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct GainMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl GainMatrix {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::InvalidParams(format!(
                "matrix of shape {rows}x{cols} cannot hold {} entries",
                data.len()
            )));
        }
        if let Some(bad) = data.iter().find(|v| !(**v >= 0.0) || !v.is_finite()) {
            return Err(Error::InvalidParams(format!("channel gains must be finite and nonnegative, got {bad}")));
        }
        Ok(GainMatrix { rows, cols, data })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        if rows.iter().any(|r| r.as_ref().len() != cols) {
            return Err(Error::InvalidParams("ragged matrix rows".into()));
        }
        let data = rows.iter().flat_map(|r| r.as_ref().iter().copied()).collect();
        Self::from_vec(rows.len(), cols, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }
}

/// One fading draw: `h` is N x M (BS to UE1), `g` is N x K (BS to UE2).
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    pub h: GainMatrix,
    pub g: GainMatrix,
}

impl ChannelRealization {
    pub fn new(h: GainMatrix, g: GainMatrix) -> Result<Self> {
        if h.rows() != g.rows() {
            return Err(Error::InvalidParams(format!(
                "h has {} BS rows but g has {}",
                h.rows(),
                g.rows()
            )));
        }
        Ok(ChannelRealization { h, g })
    }

    pub fn n_bs(&self) -> usize {
        self.h.rows()
    }
    pub fn n_ue1(&self) -> usize {
        self.h.cols()
    }
    pub fn n_ue2(&self) -> usize {
        self.g.cols()
    }

    pub fn matches(&self, p: &SystemParams) -> bool {
        self.n_bs() == p.n_bs() && self.n_ue1() == p.n_ue1() && self.n_ue2() == p.n_ue2()
    }
}

/// Per-user rates (bits/s/Hz), their sum and the Jain index.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateReport {
    pub r1: f64,
    pub r2: f64,
    pub r_sum: f64,
    pub eta: f64,
    /// `true` when UE1 holds the strong (larger or equal) gain.
    pub delta: bool,
}

impl RateReport {
    fn from_rates(r1: f64, r2: f64, delta: bool) -> Self {
        RateReport { r1, r2, r_sum: r1 + r2, eta: jain_index(r1, r2), delta }
    }
}

/// Rate of the user decoding after SIC.
#[inline]
pub fn strong_user_rate(gamma_s: f64, p: &SystemParams) -> f64 {
    (p.rho * p.b() * gamma_s).ln_1p() / std::f64::consts::LN_2
}

/// Rate of the user decoding its own signal with the other as interference.
#[inline]
pub fn weak_user_rate(gamma_w: f64, p: &SystemParams) -> f64 {
    if gamma_w == 0.0 {
        return 0.0;
    }
    (p.a * gamma_w / (p.b() * gamma_w + 1.0 / p.rho)).ln_1p() / std::f64::consts::LN_2
}

/// Instantaneous sum rate for an ordered pair of gains.
#[inline]
pub fn sum_rate(gamma_s: f64, gamma_w: f64, p: &SystemParams) -> f64 {
    strong_user_rate(gamma_s, p) + weak_user_rate(gamma_w, p)
}

/// Achievable NOMA rates for the selected gains `h_sel` (UE1) and `g_sel` (UE2).
///
/// UE1 is the strong user iff `h_sel >= g_sel`.
pub fn noma_rates(h_sel: f64, g_sel: f64, p: &SystemParams) -> RateReport {
    debug_assert!(h_sel >= 0.0 && g_sel >= 0.0);
    let delta = h_sel >= g_sel;
    let (gamma_s, gamma_w) = if delta { (h_sel, g_sel) } else { (g_sel, h_sel) };
    let strong = strong_user_rate(gamma_s, p);
    let weak = weak_user_rate(gamma_w, p);
    if delta {
        RateReport::from_rates(strong, weak, true)
    } else {
        RateReport::from_rates(weak, strong, false)
    }
}

/// Jain fairness index for two users. Equal to 1 at `r1 = r2 = 0`.
pub fn jain_index(r1: f64, r2: f64) -> f64 {
    let denom = 2.0 * (r1 * r1 + r2 * r2);
    if denom == 0.0 {
        return 1.0;
    }
    (r1 + r2) * (r1 + r2) / denom
}

/// Orthogonal baseline: two half-length slots, each user served alone on its
/// own best link. The stronger gain gets power fraction `a`, the weaker `b`.
///
/// `delta` reports whether UE1 was the stronger of the two.
pub fn oma_rates(h_best: f64, g_best: f64, p: &SystemParams) -> RateReport {
    debug_assert!(h_best >= 0.0 && g_best >= 0.0);
    let delta = h_best >= g_best;
    let (gamma_s, gamma_w) = if delta { (h_best, g_best) } else { (g_best, h_best) };
    let half_rate = |frac: f64, gamma: f64| 0.5 * (frac * p.rho * gamma).ln_1p() / std::f64::consts::LN_2;
    let strong = half_rate(p.a, gamma_s);
    let weak = half_rate(p.b(), gamma_w);
    if delta {
        RateReport::from_rates(strong, weak, true)
    } else {
        RateReport::from_rates(weak, strong, false)
    }
}
