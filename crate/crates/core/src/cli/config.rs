//! Run configuration files.
//!
//! A config is a small sectioned key-value (TOML) file:
//!
//! ```toml
//! [system]
//! n_bs = 2
//! d2 = 100.0
//!
//! [sweep]
//! axis = "ps_dbm"
//! points = [0, 5, 10, 15, 20, 25, 30, 35, 40]
//! trials = 100000
//! seed = 2017
//! schemes = ["NOMA_ES", "AIA", "A3", "NOMA_RAN", "OMA_ES", "AIA_ANALYTIC", "A3_ANALYTIC"]
//!
//! [output]
//! format = "csv"
//! ```
//!
//! Every omitted key takes the reference-scenario default; unknown keys are errors.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::link_model::{ScenarioConfig, SystemParams};
use crate::montecarlo::{Scheme, SweepAxis, SweepSpec};

pub const DEFAULT_TRIALS: u64 = 100_000;
pub const MAX_TRIALS: u64 = 10_000_000;
pub const DEFAULT_SEED: u64 = 2017;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub format: Format,
    pub path: Option<PathBuf>,
    pub verbosity: u8,
    /// Also write a gnuplot script that plots the CSV table.
    pub gnuplot: Option<PathBuf>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig { format: Format::Csv, path: None, verbosity: 0, gnuplot: None }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    axis: Option<String>,
    points: Option<Vec<f64>>,
    trials: Option<u64>,
    seed: Option<u64>,
    schemes: Option<Vec<String>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(default)]
    system: Option<toml::Table>,
    #[serde(default)]
    sweep: RawSweep,
    #[serde(default)]
    output: OutputConfig,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub sweep: SweepSpec,
    pub output: OutputConfig,
    /// Keys that were filled from defaults, `section.key`.
    pub defaulted: Vec<String>,
}

pub fn parse_axis(s: &str) -> Result<SweepAxis> {
    match s.trim().to_ascii_lowercase().as_str() {
        "ps_dbm" | "ps" => Ok(SweepAxis::PsDbm),
        "n_bs" | "n" => Ok(SweepAxis::NBs),
        "d2" => Ok(SweepAxis::D2),
        "b" | "b_coeff" => Ok(SweepAxis::BCoeff),
        other => Err(Error::Config(format!("unknown sweep axis '{other}'"))),
    }
}

/// Default sweep grid for each axis.
pub fn default_points(axis: SweepAxis) -> Vec<f64> {
    match axis {
        SweepAxis::PsDbm => (0..=8).map(|i| 5.0 * i as f64).collect(),
        SweepAxis::NBs => (1..=8).map(|n| n as f64).collect(),
        SweepAxis::D2 => (2..=10).map(|i| 20.0 * i as f64).collect(),
        SweepAxis::BCoeff => vec![0.1, 0.2, 0.3, 0.4, 0.49],
    }
}

const SYSTEM_KEYS: [&str; 9] = ["n_bs", "n_ue1", "n_ue2", "d1", "d2", "alpha", "b", "ps_dbm", "sigma_dbm"];

impl RunConfig {
    pub fn parse(text: &str) -> Result<RunConfig> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Config(one_line(&e.to_string())))?;
        let mut defaulted = Vec::new();

        let system_table = raw.system.unwrap_or_default();
        for key in SYSTEM_KEYS {
            if !system_table.contains_key(key) {
                defaulted.push(format!("system.{key}"));
            }
        }
        let scenario: ScenarioConfig = toml::Value::Table(system_table)
            .try_into()
            .map_err(|e: toml::de::Error| Error::Config(one_line(&e.to_string())))?;
        let base = SystemParams::derive(scenario).map_err(|e| Error::Config(e.to_string()))?;

        let sweep = raw.sweep;
        let mut note = |key: &str, present: bool| {
            if !present {
                defaulted.push(format!("sweep.{key}"));
            }
        };
        note("axis", sweep.axis.is_some());
        note("points", sweep.points.is_some());
        note("trials", sweep.trials.is_some());
        note("seed", sweep.seed.is_some());
        note("schemes", sweep.schemes.is_some());

        let axis = sweep.axis.as_deref().map(parse_axis).transpose()?.unwrap_or(SweepAxis::PsDbm);
        // the swept key is overridden at every point, so its base value is not a default in use
        let swept = format!("system.{}", axis.name());
        defaulted.retain(|k| *k != swept);
        let schemes = match sweep.schemes {
            Some(names) => names
                .iter()
                .map(|n| Scheme::from_name(n).ok_or_else(|| Error::Config(format!("unknown scheme '{n}'"))))
                .collect::<Result<Vec<_>>>()?,
            None => Scheme::ALL.to_vec(),
        };
        let spec = SweepSpec {
            base,
            axis,
            points: sweep.points.unwrap_or_else(|| default_points(axis)),
            trials: sweep.trials.unwrap_or(DEFAULT_TRIALS),
            seed: sweep.seed.unwrap_or(DEFAULT_SEED),
            schemes,
        };
        let cfg = RunConfig { sweep: spec, output: raw.output, defaulted };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.sweep.trials > MAX_TRIALS {
            return Err(Error::Config(format!("trials must not exceed {MAX_TRIALS}")));
        }
        self.sweep.validate().map_err(|e| match e {
            Error::Config(_) => e,
            other => Error::Config(other.to_string()),
        })
    }
}

fn one_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_is_reference_scenario() {
        let cfg = RunConfig::parse("").unwrap();
        let c = cfg.sweep.base.config();
        assert_eq!((c.n_bs, c.n_ue1, c.n_ue2), (2, 2, 2));
        assert_eq!((c.d1, c.d2, c.alpha, c.b, c.sigma_dbm), (30.0, 100.0, 3.0, 0.4, -70.0));
        assert_eq!(cfg.sweep.base.a(), 0.6);
        assert_eq!(cfg.sweep.axis, SweepAxis::PsDbm);
        assert_eq!(cfg.sweep.points.len(), 9);
        assert_eq!(cfg.sweep.schemes.len(), 7);
        assert_eq!(cfg.defaulted.len(), 13);
        assert!(!cfg.defaulted.contains(&"system.ps_dbm".to_string()));
    }

    #[test]
    fn rejects_unknown_keys() {
        assert!(matches!(RunConfig::parse("[system]\nn_antennas = 3\n"), Err(Error::Config(_))));
        assert!(matches!(RunConfig::parse("[sweep]\nstep = 3\n"), Err(Error::Config(_))));
        assert!(matches!(RunConfig::parse("[extra]\nx = 1\n"), Err(Error::Config(_))));
    }

    #[test]
    fn rejects_bad_power_split() {
        let err = RunConfig::parse("[system]\nb = 0.6\n").unwrap_err();
        assert!(err.to_string().contains("a > b"), "{err}");
    }

    #[test]
    fn rejects_bad_schemes_and_points() {
        assert!(RunConfig::parse("[sweep]\nschemes = [\"FOO\"]\n").is_err());
        assert!(RunConfig::parse("[sweep]\npoints = [3, 1, 2]\n").is_err());
        assert!(RunConfig::parse("[sweep]\naxis = \"n_bs\"\npoints = [1.5]\n").is_err());
        assert!(RunConfig::parse("[sweep]\ntrials = 0\n").is_err());
    }

    #[test]
    fn explicit_values_win() {
        let cfg = RunConfig::parse(
            "[system]\nn_bs = 4\nd1 = 60.0\n[sweep]\naxis = \"b\"\ntrials = 10\nschemes = [\"AIA\", \"a3\"]\n[output]\nformat = \"json\"\n",
        )
        .unwrap();
        assert_eq!(cfg.sweep.base.n_bs(), 4);
        assert_eq!(cfg.sweep.base.omega_h(), 216000.0);
        assert_eq!(cfg.sweep.axis, SweepAxis::BCoeff);
        assert_eq!(cfg.sweep.schemes, vec![Scheme::Aia, Scheme::A3]);
        assert_eq!(cfg.output.format, Format::Json);
    }
}
