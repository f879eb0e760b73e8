//! Antenna selection policies.
//!
//! Every policy returns a [`SelectionResult`] holding the chosen (BS, UE1, UE2)
//! antenna triple and the ordered gains of that triple. Ties always break toward
//! the lowest index (rows before columns).
//!
//! `op_count` counts one unit per scalar comparison performed by the heuristics
//! and one unit per sum-rate evaluation performed by exhaustive search.

use rand::Rng;
use serde::Serialize;

use crate::link_model::{noma_rates, ChannelRealization, SystemParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum User {
    Ue1,
    Ue2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Algorithm {
    /// Exhaustive search over all N*M*K triples.
    Es,
    /// Max-min-max.
    Aia,
    /// Max-max-max.
    A3,
    /// Uniform random triple.
    Ran,
}

/// Chosen antennas (0-based) and the ordered gains of the chosen pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SelectionResult {
    pub bs: usize,
    pub ue1: usize,
    pub ue2: usize,
    pub gamma_s: f64,
    pub gamma_w: f64,
    pub strong_user: User,
    pub algorithm: Algorithm,
    pub op_count: u64,
}

impl SelectionResult {
    fn from_triple(ch: &ChannelRealization, bs: usize, ue1: usize, ue2: usize, algorithm: Algorithm, op_count: u64) -> Self {
        let h = ch.h.get(bs, ue1);
        let g = ch.g.get(bs, ue2);
        let (gamma_s, gamma_w, strong_user) = if h >= g { (h, g, User::Ue1) } else { (g, h, User::Ue2) };
        SelectionResult { bs, ue1, ue2, gamma_s, gamma_w, strong_user, algorithm, op_count }
    }

    /// `(i, m, k)` with 1-based indices.
    pub fn one_based(&self) -> (usize, usize, usize) {
        (self.bs + 1, self.ue1 + 1, self.ue2 + 1)
    }

    /// Selected `h` and `g` gains, in user order.
    pub fn user_gains(&self) -> (f64, f64) {
        match self.strong_user {
            User::Ue1 => (self.gamma_s, self.gamma_w),
            User::Ue2 => (self.gamma_w, self.gamma_s),
        }
    }
}

/// Largest entry of a row and its column, lowest column on ties.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RowMax {
    pub value: f64,
    pub col: usize,
}

/// Stage 1 shared by both heuristics: per-row maxima of `h` and `g`.
///
/// Returns the pair list and the number of comparisons spent.
pub fn row_maxima(ch: &ChannelRealization) -> (Vec<(RowMax, RowMax)>, u64) {
    let mut ops = 0u64;
    let mut arg_max = |row: &[f64]| {
        let mut best = RowMax { value: row[0], col: 0 };
        for (col, &v) in row.iter().enumerate().skip(1) {
            ops += 1;
            if v > best.value {
                best = RowMax { value: v, col };
            }
        }
        best
    };
    let pairs = (0..ch.n_bs())
        .map(|i| (arg_max(ch.h.row(i)), arg_max(ch.g.row(i))))
        .collect();
    (pairs, ops)
}

/// Exhaustive search maximising the NOMA sum rate.
pub fn exhaustive_search(ch: &ChannelRealization, p: &SystemParams) -> SelectionResult {
    let (n, m, k) = (ch.n_bs(), ch.n_ue1(), ch.n_ue2());
    let mut best = (f64::NEG_INFINITY, 0, 0, 0);
    let mut evals = 0u64;
    for i in 0..n {
        for mi in 0..m {
            let h = ch.h.get(i, mi);
            for ki in 0..k {
                evals += 1;
                let r = noma_rates(h, ch.g.get(i, ki), p).r_sum;
                if r > best.0 {
                    best = (r, i, mi, ki);
                }
            }
        }
    }
    SelectionResult::from_triple(ch, best.1, best.2, best.3, Algorithm::Es, evals)
}

/// Which element of a row pair a heuristic keeps in stage 2.
#[derive(Clone, Copy)]
enum Stage2 {
    Smaller,
    Larger,
}

fn staged_select(ch: &ChannelRealization, stage2: Stage2, algorithm: Algorithm) -> SelectionResult {
    let (pairs, mut ops) = row_maxima(ch);

    // Stage 2: one comparison per row. At equality h counts as the larger element.
    let kept: Vec<f64> = pairs
        .iter()
        .map(|(h, g)| {
            ops += 1;
            let h_larger = h.value >= g.value;
            match (stage2, h_larger) {
                (Stage2::Smaller, true) | (Stage2::Larger, false) => g.value,
                (Stage2::Smaller, false) | (Stage2::Larger, true) => h.value,
            }
        })
        .collect();

    // Stage 3
    let mut best_row = 0;
    for (i, &v) in kept.iter().enumerate().skip(1) {
        ops += 1;
        if v > kept[best_row] {
            best_row = i;
        }
    }

    let (h, g) = pairs[best_row];
    SelectionResult::from_triple(ch, best_row, h.col, g.col, algorithm, ops)
}

/// Max-min-max selection: maximise the weaker of each row's best gains.
pub fn aia_select(ch: &ChannelRealization) -> SelectionResult {
    staged_select(ch, Stage2::Smaller, Algorithm::Aia)
}

/// Max-max-max selection: pick the row holding the global maximum gain.
pub fn a3_select(ch: &ChannelRealization) -> SelectionResult {
    staged_select(ch, Stage2::Larger, Algorithm::A3)
}

/// Uniform independent choice of the three antennas.
pub fn random_select<R: Rng + ?Sized>(ch: &ChannelRealization, rng: &mut R) -> SelectionResult {
    let (i, m, k) = random_triple((ch.n_bs(), ch.n_ue1(), ch.n_ue2()), rng);
    SelectionResult::from_triple(ch, i, m, k, Algorithm::Ran, 0)
}

/// Draws a 0-based `(i, m, k)` uniformly from `dims = (N, M, K)`.
pub fn random_triple<R: Rng + ?Sized>(dims: (usize, usize, usize), rng: &mut R) -> (usize, usize, usize) {
    (rng.gen_range(0..dims.0), rng.gen_range(0..dims.1), rng.gen_range(0..dims.2))
}

/// Location and value of a matrix maximum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BestEntry {
    pub value: f64,
    pub row: usize,
    pub col: usize,
}

/// Per-user best link, used by the orthogonal baseline. Each user may use a
/// different BS antenna.
pub fn oma_select(ch: &ChannelRealization) -> (BestEntry, BestEntry) {
    let best = |m: &crate::link_model::GainMatrix| {
        let mut b = BestEntry { value: m.get(0, 0), row: 0, col: 0 };
        for row in 0..m.rows() {
            for col in 0..m.cols() {
                let v = m.get(row, col);
                if v > b.value {
                    b = BestEntry { value: v, row, col };
                }
            }
        }
        b
    };
    (best(&ch.h), best(&ch.g))
}
