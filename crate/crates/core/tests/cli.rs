use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_noma-as"))
}

fn config_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn write_config(dir: &tempfile::TempDir, text: &str) -> PathBuf {
    let path = dir.path().join("run.cfg");
    std::fs::write(&path, text).unwrap();
    path
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn data_rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn fig2_config_gives_nine_points_by_seven_schemes() {
    let fig2 = config_path("fig2.cfg");
    let out = run(&["simulate", "--config", fig2.to_str().unwrap(), "--trials", "200"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.starts_with("# schema: noma-as/simulate v1\n"));
    assert!(text.contains("\npoint,scheme,mean_rsum,mean_r1,mean_r2,mean_eta,stderr,trials\n"));
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 63);
    assert!(rows.iter().all(|r| r.len() == 8));
    assert_eq!(rows[0][0], "0");
    assert_eq!(rows[62][0], "40");
    assert_eq!(rows[62][1], "A3_ANALYTIC");
}

#[test]
fn every_bundled_config_parses() {
    for fig in 2..=6 {
        let path = config_path(&format!("fig{fig}.cfg"));
        let cfg = noma_as::cli::config::RunConfig::load(&path).unwrap_or_else(|e| panic!("fig{fig}: {e}"));
        assert_eq!(cfg.sweep.trials, 100_000);
    }
}

#[test]
fn empty_config_applies_defaults_and_says_so() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(&dir, "");
    let out = run(&["simulate", "--config", path.to_str().unwrap(), "--trials", "50"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let note = text.lines().find(|l| l.starts_with("# defaults applied:")).expect("defaults header");
    assert!(note.contains("system.n_bs") && note.contains("sweep.points"));
    assert!(text.contains("n_bs=2 n_ue1=2 n_ue2=2 d1=30 d2=100 alpha=3 b=0.4"));
    assert!(text.contains("sigma_dbm=-70"));
    assert_eq!(data_rows(&text).len(), 63);
}

#[test]
fn bad_power_split_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(&dir, "[system]\nb = 0.6\n");
    let out = run(&["simulate", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(err.starts_with("error: kind=config message="), "{err}");
    assert!(err.contains("a > b"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn unknown_key_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(&dir, "[system]\nn_antennas = 4\n");
    let out = run(&["analyze", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("n_antennas"), "{}", stderr(&out));
}

#[test]
fn io_failures_exit_4() {
    let out = run(&["simulate", "--config", "/nonexistent/run.cfg"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(stderr(&out).starts_with("error: kind=io"));

    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, "[sweep]\npoints = [20]\ntrials = 10\n");
    let target = dir.path().join("missing-dir").join("out.csv");
    let out = run(&["simulate", "--config", cfg.to_str().unwrap(), "--out", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn repeated_runs_are_byte_identical_for_any_worker_count() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, "[sweep]\npoints = [10, 30]\ntrials = 3000\nseed = 5\n");
    let mut outputs = Vec::new();
    for (i, workers) in ["1", "1", "3"].iter().enumerate() {
        let target = dir.path().join(format!("out{i}.csv"));
        let out = run(&["simulate", "--config", cfg.to_str().unwrap(), "--out", target.to_str().unwrap(), "--workers", workers]);
        assert!(out.status.success(), "{}", stderr(&out));
        assert!(out.stdout.is_empty());
        outputs.push(std::fs::read(&target).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[0], outputs[2]);
}

#[test]
fn seed_override_changes_results() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, "[sweep]\npoints = [20]\ntrials = 500\nschemes = [\"AIA\"]\n");
    let a = stdout(&run(&["simulate", "--config", cfg.to_str().unwrap(), "--seed", "1"]));
    let b = stdout(&run(&["simulate", "--config", cfg.to_str().unwrap(), "--seed", "2"]));
    assert_ne!(data_rows(&a), data_rows(&b));
    assert!(a.contains("seed=1"));
}

#[test]
fn json_output_is_valid() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, "[sweep]\npoints = [20]\ntrials = 100\n");
    let out = run(&["simulate", "--config", cfg.to_str().unwrap(), "--format", "json"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["schema"], "noma-as/simulate v1");
    assert_eq!(doc["results"][0]["rows"].as_array().unwrap().len(), 7);
}

#[test]
fn analyze_single_antennas_gives_equal_closed_forms() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, "[system]\nn_bs = 1\nn_ue1 = 1\nn_ue2 = 1\n[sweep]\npoints = [20, 30]\n");
    let out = run(&["analyze", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.starts_with("# schema: noma-as/analyze v1\n"));
    for row in data_rows(&text) {
        let aia: f64 = row[1].parse().unwrap();
        let a3: f64 = row[2].parse().unwrap();
        assert!((aia - a3).abs() <= 1e-12 * a3, "{row:?}");
    }
}

#[test]
fn analyze_matches_quadrature_and_flags_low_snr() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, "[sweep]\npoints = [0, 30]\n");
    let out = run(&["analyze", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let rows = data_rows(&stdout(&out));
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0][8], "true");
    assert_eq!(rows[1][8], "false");
    for gap in [&rows[1][5], &rows[1][6]] {
        assert!(gap.parse::<f64>().unwrap() <= 1e-6, "{gap}");
    }
}

#[test]
fn analyze_marks_refused_closed_forms() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, "[system]\nn_bs = 12\n[sweep]\npoints = [30]\n");
    let out = run(&["analyze", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let row = &data_rows(&text)[0];
    assert_eq!(row[1], "NA");
    assert_eq!(row[2], "NA");
    assert!(text.lines().any(|l| l.starts_with("# point 30:")));
}

#[test]
fn validate_passes() {
    let out = run(&["validate"]);
    assert_eq!(out.status.code(), Some(0), "{}{}", stdout(&out), stderr(&out));
    let text = stdout(&out);
    assert!(text.lines().count() >= 6);
    assert!(text.lines().all(|l| l.starts_with("PASS ")), "{text}");
}

#[test]
fn gnuplot_script_references_the_table() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, "[sweep]\npoints = [20]\ntrials = 10\n");
    let table = dir.path().join("t.csv");
    let script = dir.path().join("t.gp");
    let out = run(&[
        "simulate",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        table.to_str().unwrap(),
        "--gnuplot",
        script.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let gp = std::fs::read_to_string(&script).unwrap();
    assert!(gp.contains(table.to_str().unwrap()));
    assert!(gp.contains("'NOMA_ES'"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["simulate", "--format", "xml"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}
