//! Reproducible Monte Carlo sweeps.
//!
//! Every channel entry is drawn from a ChaCha8 stream keyed on
//! `(seed, trial, matrix, row, col)`, so a realization depends only on its key and
//! never on scheduling. Trials are reduced in fixed-size chunks and the chunk
//! partials are merged by an ordered pairwise tree; results are therefore
//! bit-identical for any worker count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::{avg_sum_rate_a3, avg_sum_rate_aia, snr_guard};
use crate::error::{Error, Result};
use crate::link_model::{noma_rates, oma_rates, ChannelRealization, GainMatrix, RateReport, SystemParams};
use crate::selection::{a3_select, aia_select, exhaustive_search, oma_select, random_select, SelectionResult};

/// Trials per reduction chunk.
const CHUNK: u64 = 1024;

/// Absolute slack allowed when checking exhaustive-search dominance.
pub const DOMINANCE_SLACK: f64 = 1e-12;

const STREAM_H: u64 = 0;
const STREAM_G: u64 = 1;
const STREAM_RAN: u64 = 2;

fn keyed_stream(seed: u64, trial: u64, matrix: u64, row: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    // Row-aligned word offsets: 2 words per f64, 2^24 columns per row, 2^24 rows per matrix.
    rng.set_word_pos((((matrix as u128) << 24 | row as u128) << 24) * 2);
    rng
}

fn exponential_row(seed: u64, trial: u64, matrix: u64, row: usize, cols: usize, omega: f64, out: &mut Vec<f64>) {
    let mut rng = keyed_stream(seed, trial, matrix, row as u64);
    out.extend((0..cols).map(|_| {
        let u: f64 = rng.gen();
        -(-u).ln_1p() / omega
    }));
}

/// Draws the i.i.d. exponential gain matrices of trial `trial_id` by inverse CDF.
pub fn sample_realization(p: &SystemParams, trial_id: u64, seed: u64) -> ChannelRealization {
    let (n, m, k) = (p.n_bs(), p.n_ue1(), p.n_ue2());
    let mut h = Vec::with_capacity(n * m);
    let mut g = Vec::with_capacity(n * k);
    for row in 0..n {
        exponential_row(seed, trial_id, STREAM_H, row, m, p.omega_h(), &mut h);
        exponential_row(seed, trial_id, STREAM_G, row, k, p.omega_g(), &mut g);
    }
    ChannelRealization {
        h: GainMatrix::from_vec(n, m, h).expect("gains are finite and nonnegative"),
        g: GainMatrix::from_vec(n, k, g).expect("gains are finite and nonnegative"),
    }
}

/// Random stream used by the random selector in trial `trial_id`.
pub fn selection_stream(trial_id: u64, seed: u64) -> ChaCha8Rng {
    keyed_stream(seed, trial_id, STREAM_RAN, 0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SweepAxis {
    PsDbm,
    NBs,
    D2,
    BCoeff,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::PsDbm => "ps_dbm",
            SweepAxis::NBs => "n_bs",
            SweepAxis::D2 => "d2",
            SweepAxis::BCoeff => "b",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Scheme {
    NomaEs,
    Aia,
    A3,
    NomaRan,
    OmaEs,
    AiaAnalytic,
    A3Analytic,
}

impl Scheme {
    pub const ALL: [Scheme; 7] =
        [Scheme::NomaEs, Scheme::Aia, Scheme::A3, Scheme::NomaRan, Scheme::OmaEs, Scheme::AiaAnalytic, Scheme::A3Analytic];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::NomaEs => "NOMA_ES",
            Scheme::Aia => "AIA",
            Scheme::A3 => "A3",
            Scheme::NomaRan => "NOMA_RAN",
            Scheme::OmaEs => "OMA_ES",
            Scheme::AiaAnalytic => "AIA_ANALYTIC",
            Scheme::A3Analytic => "A3_ANALYTIC",
        }
    }

    pub fn from_name(s: &str) -> Option<Scheme> {
        Scheme::ALL.into_iter().find(|k| k.name().eq_ignore_ascii_case(s.trim()))
    }

    pub fn is_analytic(self) -> bool {
        matches!(self, Scheme::AiaAnalytic | Scheme::A3Analytic)
    }
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub base: SystemParams,
    pub axis: SweepAxis,
    pub points: Vec<f64>,
    pub trials: u64,
    pub seed: u64,
    pub schemes: Vec<Scheme>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.points.is_empty() {
            return Err(Error::InvalidParams("sweep needs at least one point".into()));
        }
        let increasing = self.points.windows(2).all(|w| w[0] < w[1]);
        let decreasing = self.points.windows(2).all(|w| w[0] > w[1]);
        if !(increasing || decreasing) {
            return Err(Error::InvalidParams("sweep points must be strictly monotone".into()));
        }
        if self.trials == 0 {
            return Err(Error::InvalidParams("trials must be at least 1".into()));
        }
        if self.schemes.is_empty() {
            return Err(Error::InvalidParams("no schemes selected".into()));
        }
        for &pt in &self.points {
            self.params_at(pt)?;
        }
        Ok(())
    }

    /// Scenario at one sweep point.
    pub fn params_at(&self, point: f64) -> Result<SystemParams> {
        self.base.with(|c| match self.axis {
            SweepAxis::PsDbm => c.ps_dbm = point,
            SweepAxis::D2 => c.d2 = point,
            SweepAxis::BCoeff => c.b = point,
            SweepAxis::NBs => c.n_bs = if point >= 1.0 && point.fract() == 0.0 { point as usize } else { 0 },
        })
    }
}

/// Running count, mean and sum of squared deviations.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Moments {
    pub n: u64,
    pub mean: f64,
    pub m2: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    pub fn merge(&self, other: &Moments) -> Moments {
        if self.n == 0 {
            return *other;
        }
        if other.n == 0 {
            return *self;
        }
        let n = self.n + other.n;
        let d = other.mean - self.mean;
        let (na, nb) = (self.n as f64, other.n as f64);
        Moments { n, mean: self.mean + d * nb / n as f64, m2: self.m2 + other.m2 + d * d * na * nb / n as f64 }
    }

    /// Sample standard deviation over sqrt(n).
    pub fn stderr(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        (self.m2 / (self.n - 1) as f64).sqrt() / (self.n as f64).sqrt()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RateMoments {
    pub r_sum: Moments,
    pub r1: Moments,
    pub r2: Moments,
    pub eta: Moments,
}

impl RateMoments {
    fn push(&mut self, r: &RateReport) {
        self.r_sum.push(r.r_sum);
        self.r1.push(r.r1);
        self.r2.push(r.r2);
        self.eta.push(r.eta);
    }

    fn merge(&self, o: &RateMoments) -> RateMoments {
        RateMoments {
            r_sum: self.r_sum.merge(&o.r_sum),
            r1: self.r1.merge(&o.r1),
            r2: self.r2.merge(&o.r2),
            eta: self.eta.merge(&o.eta),
        }
    }
}

/// Simulated statistics of one scheme at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimStats {
    pub mean_rsum: f64,
    pub mean_r1: f64,
    pub mean_r2: f64,
    pub mean_eta: f64,
    pub stderr: f64,
    pub stderr_eta: f64,
    pub trials: u64,
}

impl From<&RateMoments> for SimStats {
    fn from(m: &RateMoments) -> Self {
        SimStats {
            mean_rsum: m.r_sum.mean,
            mean_r1: m.r1.mean,
            mean_r2: m.r2.mean,
            mean_eta: m.eta.mean,
            stderr: m.r_sum.stderr(),
            stderr_eta: m.eta.stderr(),
            trials: m.r_sum.n,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SchemeOutcome {
    Simulated(SimStats),
    Analytic { mean_rsum: f64, high_snr_valid: bool },
    Skipped { reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchemeRow {
    pub scheme: Scheme,
    pub outcome: SchemeOutcome,
}

impl SchemeRow {
    pub fn mean_rsum(&self) -> Option<f64> {
        match &self.outcome {
            SchemeOutcome::Simulated(s) => Some(s.mean_rsum),
            SchemeOutcome::Analytic { mean_rsum, .. } => Some(*mean_rsum),
            SchemeOutcome::Skipped { .. } => None,
        }
    }

    pub fn sim(&self) -> Option<&SimStats> {
        match &self.outcome {
            SchemeOutcome::Simulated(s) => Some(s),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointResult {
    pub point: f64,
    pub rows: Vec<SchemeRow>,
    /// Realizations on which exhaustive search was compared against the heuristics.
    pub dominance_checks: u64,
    pub dominance_violations: u64,
}

impl PointResult {
    pub fn row(&self, scheme: Scheme) -> Option<&SchemeRow> {
        self.rows.iter().find(|r| r.scheme == scheme)
    }

    pub fn sim(&self, scheme: Scheme) -> Option<&SimStats> {
        self.row(scheme).and_then(SchemeRow::sim)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub axis: SweepAxis,
    pub points: Vec<PointResult>,
}

impl SweepResult {
    pub fn point(&self, point: f64) -> Option<&PointResult> {
        self.points.iter().find(|p| p.point == point)
    }

    /// Mean sum rate of `scheme` across all points, in sweep order.
    pub fn curve(&self, scheme: Scheme) -> Vec<Option<f64>> {
        self.points.iter().map(|p| p.row(scheme).and_then(SchemeRow::mean_rsum)).collect()
    }
}

/// Rates of every simulated scheme for one realization.
pub fn evaluate_trial(p: &SystemParams, trial_id: u64, seed: u64, schemes: &[Scheme]) -> TrialOutcome {
    let ch = sample_realization(p, trial_id, seed);
    let noma = |s: SelectionResult| {
        let (h, g) = s.user_gains();
        noma_rates(h, g, p)
    };
    let mut rates = Vec::with_capacity(schemes.len());
    for &scheme in schemes {
        let r = match scheme {
            Scheme::NomaEs => noma(exhaustive_search(&ch, p)),
            Scheme::Aia => noma(aia_select(&ch)),
            Scheme::A3 => noma(a3_select(&ch)),
            Scheme::NomaRan => noma(random_select(&ch, &mut selection_stream(trial_id, seed))),
            Scheme::OmaEs => {
                let (h, g) = oma_select(&ch);
                oma_rates(h.value, g.value, p)
            }
            Scheme::AiaAnalytic | Scheme::A3Analytic => continue,
        };
        rates.push((scheme, r));
    }
    let es = rates.iter().find(|(s, _)| *s == Scheme::NomaEs).map(|(_, r)| r.r_sum);
    let dominance_violated = es.map(|best| {
        rates
            .iter()
            .filter(|(s, _)| matches!(s, Scheme::Aia | Scheme::A3 | Scheme::NomaRan))
            .any(|(_, r)| r.r_sum > best + DOMINANCE_SLACK)
    });
    TrialOutcome { rates, dominance_violated }
}

#[derive(Debug, Clone)]
pub struct TrialOutcome {
    pub rates: Vec<(Scheme, RateReport)>,
    /// `None` when exhaustive search was not among the schemes.
    pub dominance_violated: Option<bool>,
}

#[derive(Debug, Clone, Default)]
struct Partial {
    moments: Vec<RateMoments>,
    checks: u64,
    violations: u64,
}

impl Partial {
    fn merge(&self, o: &Partial) -> Partial {
        Partial {
            moments: self.moments.iter().zip(&o.moments).map(|(a, b)| a.merge(b)).collect(),
            checks: self.checks + o.checks,
            violations: self.violations + o.violations,
        }
    }
}

fn tree_reduce(mut parts: Vec<Partial>) -> Partial {
    while parts.len() > 1 {
        parts = parts.chunks(2).map(|c| if c.len() == 2 { c[0].merge(&c[1]) } else { c[0].clone() }).collect();
    }
    parts.pop().unwrap_or_default()
}

fn simulate_point(p: &SystemParams, spec: &SweepSpec, sim_schemes: &[Scheme]) -> Partial {
    let chunks = spec.trials.div_ceil(CHUNK);
    let partials: Vec<Partial> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut part = Partial { moments: vec![RateMoments::default(); sim_schemes.len()], ..Default::default() };
            for trial in c * CHUNK..((c + 1) * CHUNK).min(spec.trials) {
                let out = evaluate_trial(p, trial, spec.seed, sim_schemes);
                for (m, (_, r)) in part.moments.iter_mut().zip(&out.rates) {
                    m.push(r);
                }
                if let Some(v) = out.dominance_violated {
                    part.checks += 1;
                    part.violations += v as u64;
                }
            }
            part
        })
        .collect();
    tree_reduce(partials)
}

fn analytic_row(scheme: Scheme, p: &SystemParams) -> Result<SchemeRow> {
    let value = match scheme {
        Scheme::AiaAnalytic => avg_sum_rate_aia(p),
        _ => avg_sum_rate_a3(p),
    };
    let outcome = match value {
        Ok(v) => SchemeOutcome::Analytic { mean_rsum: v, high_snr_valid: snr_guard(p).valid },
        Err(Error::ExpansionTooLarge(reason)) => SchemeOutcome::Skipped { reason },
        Err(e) => return Err(e),
    };
    Ok(SchemeRow { scheme, outcome })
}

/// Runs the sweep on a pool of `workers` threads.
pub fn run_sweep(spec: &SweepSpec, workers: usize) -> Result<SweepResult> {
    spec.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::InvalidParams(format!("cannot start worker pool: {e}")))?;
    let sim_schemes: Vec<Scheme> = spec.schemes.iter().copied().filter(|s| !s.is_analytic()).collect();

    let mut points = Vec::with_capacity(spec.points.len());
    for &point in &spec.points {
        let p = spec.params_at(point)?;
        let part = if sim_schemes.is_empty() { Partial::default() } else { pool.install(|| simulate_point(&p, spec, &sim_schemes)) };
        let mut rows = Vec::with_capacity(spec.schemes.len());
        for &scheme in &spec.schemes {
            if scheme.is_analytic() {
                rows.push(analytic_row(scheme, &p)?);
            } else {
                let idx = sim_schemes.iter().position(|s| *s == scheme).expect("simulated scheme");
                rows.push(SchemeRow { scheme, outcome: SchemeOutcome::Simulated(SimStats::from(&part.moments[idx])) });
            }
        }
        points.push(PointResult { point, rows, dominance_checks: part.checks, dominance_violations: part.violations });
    }
    Ok(SweepResult { axis: spec.axis, points })
}
