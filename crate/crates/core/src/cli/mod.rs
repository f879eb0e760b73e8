//! Command-line front end: `simulate`, `analyze` and `validate`.
//!
//! Exit codes: 0 success, 2 config error, 3 numeric-validity failure, 4 I/O error.
//! Failures print a single `error: kind=<kind> message="<text>"` line on stderr.

pub mod config;
pub mod output;
pub mod validate;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::analysis::{quadrature_avg_rate, snr_guard, GammaSDistribution, Kind};
use crate::error::Error;
use crate::montecarlo::run_sweep;
pub use config::{Format, RunConfig};
use output::AnalyzeRow;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "noma-as", version, about = "Antenna selection for two-user MIMO-NOMA downlinks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, clap::Args)]
pub struct RunArgs {
    /// Scenario/sweep config; omitted keys take the reference defaults
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output file (stdout when absent)
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
    /// Monte Carlo worker threads
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub trials: Option<u64>,
    /// Also write a gnuplot script for the CSV table
    #[arg(long)]
    pub gnuplot: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Monte Carlo sweep of every configured scheme
    Simulate(RunArgs),
    /// Closed-form sum rates against quadrature at every sweep point
    Analyze(RunArgs),
    /// Built-in numerical self-check
    Validate(RunArgs),
}

/// A failed command: exit code plus message.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub kind: &'static str,
    pub message: String,
}

impl CliError {
    pub fn line(&self) -> String {
        format!("error: kind={} message={:?}", self.kind, self.message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let (code, kind) = match &e {
            Error::Io(_) => (EXIT_IO, "io"),
            Error::NoConvergence { .. } | Error::ExpansionTooLarge(_) | Error::Domain(_) => (EXIT_NUMERIC, "numeric"),
            _ => (EXIT_CONFIG, "config"),
        };
        CliError { code, kind, message: e.to_string() }
    }
}

/// Loads the config named by `args` and applies the command-line overrides.
pub fn resolve_config(args: &RunArgs) -> Result<RunConfig, CliError> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError {
                code: EXIT_IO,
                kind: "io",
                message: format!("{}: {e}", path.display()),
            })?;
            RunConfig::parse(&text)?
        }
        None => RunConfig::parse("")?,
    };
    if let Some(t) = args.trials {
        cfg.sweep.trials = t;
    }
    if let Some(s) = args.seed {
        cfg.sweep.seed = s;
    }
    if let Some(f) = args.format {
        cfg.output.format = match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        };
    }
    if args.out.is_some() {
        cfg.output.path = args.out.clone();
    }
    if args.gnuplot.is_some() {
        cfg.output.gnuplot = args.gnuplot.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn emit(cfg: &RunConfig, text: &str) -> Result<Option<String>, CliError> {
    match &cfg.output.path {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| CliError { code: EXIT_IO, kind: "io", message: format!("{}: {e}", path.display()) })?;
            Ok(None)
        }
        None => Ok(Some(text.to_string())),
    }
}

/// Runs the sweep and renders the table. Returns the text when no output path is set.
pub fn cmd_simulate(args: &RunArgs) -> Result<Option<String>, CliError> {
    let cfg = resolve_config(args)?;
    let result = run_sweep(&cfg.sweep, args.workers)?;
    if let Some(gp) = &cfg.output.gnuplot {
        let csv = cfg.output.path.as_ref().map_or("table.csv".to_string(), |p| p.display().to_string());
        std::fs::write(gp, output::gnuplot_script(&cfg, &csv))
            .map_err(|e| CliError { code: EXIT_IO, kind: "io", message: format!("{}: {e}", gp.display()) })?;
    }
    let text = match cfg.output.format {
        Format::Csv => output::simulate_csv(&cfg, &result),
        Format::Json => output::simulate_json(&cfg, &result),
    };
    emit(&cfg, &text)
}

/// Closed forms and their quadrature references at every sweep point.
pub fn analyze_rows(cfg: &RunConfig) -> Result<Vec<AnalyzeRow>, Error> {
    let mut rows = Vec::with_capacity(cfg.sweep.points.len());
    for &point in &cfg.sweep.points {
        let p = cfg.sweep.params_at(point)?;
        let guard = snr_guard(&p);
        let mut notes = Vec::new();
        let mut eval = |kind: Kind| -> Result<(Option<f64>, Option<f64>), Error> {
            let d = match GammaSDistribution::new(&p, kind) {
                Ok(d) => d,
                Err(Error::ExpansionTooLarge(m)) => {
                    notes.push(format!("{kind:?}: expansion too large ({m})"));
                    return Ok((None, None));
                }
                Err(e) => return Err(e),
            };
            let closed = match d.avg_sum_rate() {
                Ok(v) => Some(v),
                Err(Error::ExpansionTooLarge(m)) => {
                    notes.push(format!("{kind:?}: expansion too large ({m})"));
                    // the max-min-max density is built from the same expansion
                    if kind == Kind::Aia {
                        return Ok((None, None));
                    }
                    None
                }
                Err(e) => return Err(e),
            };
            let quad = match quadrature_avg_rate(|x| d.pdf(x), &p) {
                Ok(q) => Some(q.value),
                // Rounding noise in an expanded density can stall refinement well
                // below any useful accuracy; keep such estimates and say so.
                Err(Error::NoConvergence { estimate, error }) if error <= 1e-8 * estimate.abs() => {
                    notes.push(format!("{kind:?}: quadrature stalled at error {error:.1e}"));
                    Some(estimate)
                }
                Err(Error::NoConvergence { estimate, error }) => {
                    notes.push(format!("{kind:?}: quadrature did not converge (estimate {estimate}, error {error:.1e})"));
                    None
                }
                Err(e) => return Err(e),
            };
            Ok((closed, quad))
        };
        let (aia_closed, aia_quad) = eval(Kind::Aia)?;
        let (a3_closed, a3_quad) = eval(Kind::A3)?;
        let gap = |c: Option<f64>, q: Option<f64>| match (c, q) {
            (Some(c), Some(q)) => Some(((c - q) / c).abs()),
            _ => None,
        };
        rows.push(AnalyzeRow {
            point,
            aia_closed,
            a3_closed,
            aia_quadrature: aia_quad,
            a3_quadrature: a3_quad,
            aia_rel_gap: gap(aia_closed, aia_quad),
            a3_rel_gap: gap(a3_closed, a3_quad),
            snr_margin: guard.margin,
            low_snr_warning: !guard.valid,
            notes,
        });
    }
    Ok(rows)
}

pub fn cmd_analyze(args: &RunArgs) -> Result<Option<String>, CliError> {
    let cfg = resolve_config(args)?;
    let rows = analyze_rows(&cfg)?;
    let text = match cfg.output.format {
        Format::Csv => output::analyze_csv(&cfg, &rows),
        Format::Json => output::analyze_json(&cfg, &rows),
    };
    emit(&cfg, &text)
}

/// Runs the self-check, printing one line per check.
pub fn cmd_validate(subject: &validate::Subject) -> Result<String, CliError> {
    let outcomes = validate::run_all(subject);
    let mut report = String::new();
    for c in &outcomes {
        report.push_str(&format!("{} {}: {}\n", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail));
    }
    match outcomes.iter().find(|c| !c.passed) {
        None => Ok(report),
        Some(first) => {
            print!("{report}");
            Err(CliError { code: EXIT_NUMERIC, kind: "validate", message: format!("check {} failed", first.name) })
        }
    }
}

/// Parses `args` and runs the selected command, returning the process exit code.
pub fn main_from_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let result = match &cli.command {
        Command::Simulate(a) => cmd_simulate(a),
        Command::Analyze(a) => cmd_analyze(a),
        Command::Validate(_) => cmd_validate(&validate::Subject::default()).map(Some),
    };
    match result {
        Ok(Some(text)) => {
            print!("{text}");
            EXIT_OK
        }
        Ok(None) => EXIT_OK,
        Err(e) => {
            eprintln!("{}", e.line());
            e.code
        }
    }
}
