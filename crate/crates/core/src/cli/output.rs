//! Table emission for the command-line front end.

use std::fmt::Write as _;

use serde::Serialize;

use super::config::RunConfig;
use crate::montecarlo::{SchemeOutcome, SweepResult};

pub const SIMULATE_SCHEMA: &str = "noma-as/simulate v1";
pub const ANALYZE_SCHEMA: &str = "noma-as/analyze v1";

pub const SIMULATE_COLUMNS: [&str; 8] = ["point", "scheme", "mean_rsum", "mean_r1", "mean_r2", "mean_eta", "stderr", "trials"];
pub const ANALYZE_COLUMNS: [&str; 9] = [
    "point",
    "aia_closed",
    "a3_closed",
    "aia_quadrature",
    "a3_quadrature",
    "aia_rel_gap",
    "a3_rel_gap",
    "snr_margin",
    "low_snr_warning",
];

/// Formats `v` with 9 significant digits, like C's `%.9g`.
pub fn fmt_sig9(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return if v.is_nan() { "nan".into() } else if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{v:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        trim_zeros(&format!("{v:.decimals$}"))
    } else {
        format!("{}e{}{:02}", trim_zeros(mantissa), if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

fn header(out: &mut String, schema: &str, cfg: &RunConfig) {
    let c = cfg.sweep.base.config();
    let _ = writeln!(out, "# schema: {schema}");
    let _ = writeln!(
        out,
        "# system: n_bs={} n_ue1={} n_ue2={} d1={} d2={} alpha={} b={} ps_dbm={} sigma_dbm={}",
        c.n_bs, c.n_ue1, c.n_ue2, c.d1, c.d2, c.alpha, c.b, c.ps_dbm, c.sigma_dbm
    );
    let points: Vec<String> = cfg.sweep.points.iter().map(|p| fmt_sig9(*p)).collect();
    let schemes: Vec<&str> = cfg.sweep.schemes.iter().map(|s| s.name()).collect();
    let _ = writeln!(
        out,
        "# sweep: axis={} points={} trials={} seed={} schemes={}",
        cfg.sweep.axis.name(),
        points.join(";"),
        cfg.sweep.trials,
        cfg.sweep.seed,
        schemes.join(";")
    );
    if !cfg.defaulted.is_empty() {
        let _ = writeln!(out, "# defaults applied: {}", cfg.defaulted.join(" "));
    }
}

pub fn simulate_csv(cfg: &RunConfig, result: &SweepResult) -> String {
    let mut out = String::new();
    header(&mut out, SIMULATE_SCHEMA, cfg);
    let _ = writeln!(out, "{}", SIMULATE_COLUMNS.join(","));
    for pt in &result.points {
        for row in &pt.rows {
            let cells = match &row.outcome {
                SchemeOutcome::Simulated(s) => [
                    fmt_sig9(s.mean_rsum),
                    fmt_sig9(s.mean_r1),
                    fmt_sig9(s.mean_r2),
                    fmt_sig9(s.mean_eta),
                    fmt_sig9(s.stderr),
                    s.trials.to_string(),
                ],
                SchemeOutcome::Analytic { mean_rsum, .. } => {
                    [fmt_sig9(*mean_rsum), String::new(), String::new(), String::new(), "0".into(), "0".into()]
                }
                SchemeOutcome::Skipped { .. } => {
                    ["NA".into(), String::new(), String::new(), String::new(), String::new(), "0".into()]
                }
            };
            let _ = writeln!(out, "{},{},{}", fmt_sig9(pt.point), row.scheme.name(), cells.join(","));
        }
    }
    out
}

#[derive(Debug, Serialize)]
struct JsonDoc<'a, T: Serialize> {
    schema: &'a str,
    system: &'a crate::link_model::ScenarioConfig,
    axis: &'a str,
    trials: u64,
    seed: u64,
    defaults_applied: &'a [String],
    results: &'a T,
}

fn to_json<T: Serialize>(schema: &str, cfg: &RunConfig, results: &T) -> String {
    let doc = JsonDoc {
        schema,
        system: cfg.sweep.base.config(),
        axis: cfg.sweep.axis.name(),
        trials: cfg.sweep.trials,
        seed: cfg.sweep.seed,
        defaults_applied: &cfg.defaulted,
        results,
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("tables serialise");
    s.push('\n');
    s
}

pub fn simulate_json(cfg: &RunConfig, result: &SweepResult) -> String {
    to_json(SIMULATE_SCHEMA, cfg, &result.points)
}

/// One line of the closed-form table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalyzeRow {
    pub point: f64,
    pub aia_closed: Option<f64>,
    pub a3_closed: Option<f64>,
    pub aia_quadrature: Option<f64>,
    pub a3_quadrature: Option<f64>,
    pub aia_rel_gap: Option<f64>,
    pub a3_rel_gap: Option<f64>,
    pub snr_margin: f64,
    pub low_snr_warning: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

pub fn analyze_csv(cfg: &RunConfig, rows: &[AnalyzeRow]) -> String {
    let mut out = String::new();
    header(&mut out, ANALYZE_SCHEMA, cfg);
    for r in rows {
        for n in &r.notes {
            let _ = writeln!(out, "# point {}: {}", fmt_sig9(r.point), n);
        }
    }
    let _ = writeln!(out, "{}", ANALYZE_COLUMNS.join(","));
    let cell = |v: Option<f64>| v.map_or_else(|| "NA".to_string(), fmt_sig9);
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            fmt_sig9(r.point),
            cell(r.aia_closed),
            cell(r.a3_closed),
            cell(r.aia_quadrature),
            cell(r.a3_quadrature),
            cell(r.aia_rel_gap),
            cell(r.a3_rel_gap),
            fmt_sig9(r.snr_margin),
            r.low_snr_warning
        );
    }
    out
}

pub fn analyze_json(cfg: &RunConfig, rows: &[AnalyzeRow]) -> String {
    to_json(ANALYZE_SCHEMA, cfg, &rows)
}

/// Gnuplot script drawing one curve per scheme from a simulate CSV.
pub fn gnuplot_script(cfg: &RunConfig, csv_path: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "set key left top");
    let _ = writeln!(s, "set xlabel '{}'", cfg.sweep.axis.name());
    let _ = writeln!(s, "set ylabel 'average sum rate (bits/s/Hz)'");
    let plots: Vec<String> = cfg
        .sweep
        .schemes
        .iter()
        .map(|k| {
            format!(
                "'{csv_path}' using 1:(strcol(2) eq '{name}' ? $3 : NaN) with linespoints title '{name}'",
                name = k.name()
            )
        })
        .collect();
    let _ = writeln!(s, "plot {}", plots.join(", \\\n     "));
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(fmt_sig9(0.0), "0");
        assert_eq!(fmt_sig9(1.0), "1");
        assert_eq!(fmt_sig9(30.0), "30");
        assert_eq!(fmt_sig9(4.3074285251), "4.30742853");
        assert_eq!(fmt_sig9(4.3074285249), "4.30742852");
        assert_eq!(fmt_sig9(-0.21938393439552), "-0.219383934");
        assert_eq!(fmt_sig9(123456789.4), "123456789");
        assert_eq!(fmt_sig9(1234567890.0), "1.23456789e+09");
        assert_eq!(fmt_sig9(9.9999999999), "10");
        assert_eq!(fmt_sig9(1.5e-7), "1.5e-07");
        assert_eq!(fmt_sig9(0.0001), "0.0001");
    }
}
