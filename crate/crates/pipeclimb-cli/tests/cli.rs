//! End-to-end tests of the `pipeclimb` binary: exit codes, output files,
//! determinism, and the machine-parseable error line.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const NETWORK: &str = "\
pipe_radius 137.9
straight 550 vertical
bend 418.77 90 elbow
straight 350 horizontal
bend 418.79 180 u_section
straight 150 horizontal
";

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pipeclimb"))
}

fn write(dir: &Path, name: &str, contents: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

/// Every failure prints exactly one `error_code=<n> msg="..."` line.
fn assert_error_line(out: &Output, code: i32) {
    assert_eq!(out.status.code(), Some(code), "stderr: {}", stderr(out));
    let err = stderr(out);
    let lines: Vec<&str> = err.lines().collect();
    assert_eq!(lines.len(), 1, "expected a single stderr line, got: {err}");
    assert!(
        lines[0].starts_with(&format!("error_code={code} msg=\"")),
        "malformed error line: {}",
        lines[0]
    );
    assert!(lines[0].ends_with('"'));
}

fn parse_kv(out: &str, key: &str) -> f64 {
    out.lines()
        .find_map(|l| l.strip_prefix(&format!("{key} ")))
        .unwrap_or_else(|| panic!("missing `{key}` in output:\n{out}"))
        .trim()
        .parse()
        .unwrap()
}

#[test]
fn speeds_prints_the_reference_triple() {
    let out = bin()
        .args([
            "speeds", "--v", "50.24", "--R", "418.77", "--r", "137.9", "--mu", "0",
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!((parse_kv(&text, "v_tA") - 33.70).abs() < 0.05, "{text}");
    assert!((parse_kv(&text, "v_tB") - 58.51).abs() < 0.05);
    assert!((parse_kv(&text, "v_tC") - 58.51).abs() < 0.05);
    assert!((parse_kv(&text, "sum") - 3.0 * 50.24).abs() < 0.01);
}

#[test]
fn speeds_with_zero_pipe_radius_gives_uniform_speeds() {
    let out = bin()
        .args([
            "speeds", "--v", "50.24", "--R", "418.77", "--r", "0", "--mu", "25",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = stdout(&out);
    for key in ["v_tA", "v_tB", "v_tC"] {
        assert_eq!(parse_kv(&text, key), 50.24);
    }
}

#[test]
fn missing_required_flag_keeps_the_stderr_contract() {
    let out = bin()
        .args(["speeds", "--R", "418.77", "--r", "137.9", "--mu", "0"])
        .output()
        .unwrap();
    assert_error_line(&out, 1);
}

#[test]
fn invalid_dt_in_scenario_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "net.pipe", NETWORK);
    let scenario = write(dir.path(), "bad_dt.scenario", "network net.pipe\ndt -1\n");
    let out = bin()
        .args(["simulate", "--scenario"])
        .arg(&scenario)
        .output()
        .unwrap();
    assert_error_line(&out, 1);
}

#[test]
fn speeds_rejects_impossible_geometry_with_exit_2() {
    let out = bin()
        .args([
            "speeds", "--v", "50.24", "--R", "100", "--r", "200", "--mu", "0",
        ])
        .output()
        .unwrap();
    assert_error_line(&out, 2);
}

#[test]
fn simulate_writes_one_csv_per_orientation() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "net.pipe", NETWORK);
    write(
        dir.path(),
        "bench.scenario",
        "network net.pipe\nmu_deg 0 30 60\nmode passive\neffective_distance_mm 3016.49\n",
    );
    let out_dir = dir.path().join("out");
    let out = bin()
        .args(["simulate", "--scenario"])
        .arg(dir.path().join("bench.scenario"))
        .arg("--out-dir")
        .arg(&out_dir)
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", stderr(&out));

    for mu in [0, 30, 60] {
        let csv_path = out_dir.join(format!("bench_mu{mu}_passive.csv"));
        let csv = std::fs::read_to_string(&csv_path).unwrap();
        assert!(
            csv.starts_with("t_s,center_mm,vA_mm_s,vB_mm_s,vC_mm_s,odoA_mm,odoB_mm,odoC_mm,compA_mm,compB_mm,compC_mm,slipA_mm_s,slipB_mm_s,slipC_mm_s\n"),
            "bad header in {}",
            csv_path.display()
        );
    }

    // the mu = 0 run covers 3016.49 mm in 60.04 s within 0.5%
    let summary = std::fs::read_to_string(out_dir.join("bench_summary.csv")).unwrap();
    let row = summary
        .lines()
        .find(|l| l.starts_with("bench_mu0_passive,"))
        .expect("summary row for mu = 0");
    let time_s: f64 = row.split(',').nth(3).unwrap().parse().unwrap();
    assert!(
        (time_s - 60.04).abs() < 60.04 * 0.005,
        "total time = {time_s}"
    );
}

#[test]
fn simulate_is_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "net.pipe", NETWORK);
    let scenario = write(
        dir.path(),
        "det.scenario",
        "network net.pipe\nmu_deg 30\nmode both\n",
    );
    for run in ["a", "b"] {
        let out = bin()
            .args(["simulate", "--scenario"])
            .arg(&scenario)
            .arg("--out-dir")
            .arg(dir.path().join(run))
            .output()
            .unwrap();
        assert!(out.status.success(), "stderr: {}", stderr(&out));
    }
    for name in [
        "det_mu30_passive.csv",
        "det_mu30_fixed.csv",
        "det_summary.csv",
        "det_summary.txt",
    ] {
        let a = std::fs::read(dir.path().join("a").join(name)).unwrap();
        let b = std::fs::read(dir.path().join("b").join(name)).unwrap();
        assert_eq!(a, b, "{name} differs between identical runs");
    }
}

#[test]
fn simulate_missing_network_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = write(dir.path(), "broken.scenario", "network nosuch.pipe\n");
    let out = bin()
        .args(["simulate", "--scenario"])
        .arg(&scenario)
        .output()
        .unwrap();
    assert_error_line(&out, 1);
}

#[test]
fn simulate_reports_scenario_parse_errors_with_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "net.pipe", NETWORK);
    let scenario = write(dir.path(), "bad.scenario", "network net.pipe\nwobble 12\n");
    let out = bin()
        .args(["simulate", "--scenario"])
        .arg(&scenario)
        .output()
        .unwrap();
    assert_error_line(&out, 1);
    assert!(
        stderr(&out).contains(":2:"),
        "expected a line number: {}",
        stderr(&out)
    );
}

#[test]
fn simulate_over_compressed_springs_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "net.pipe", NETWORK);
    let scenario = write(
        dir.path(),
        "crush.scenario",
        "network net.pipe\nspring_preload_mm 15\n",
    );
    let out = bin()
        .args(["simulate", "--scenario"])
        .arg(&scenario)
        .arg("--out-dir")
        .arg(dir.path().join("out"))
        .output()
        .unwrap();
    assert_error_line(&out, 3);
    assert!(stderr(&out).contains("over-compression"));
}

#[test]
fn out_dir_defaults_to_pipeclimb_out_env() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "net.pipe", NETWORK);
    let scenario = write(dir.path(), "env.scenario", "network net.pipe\n");
    let out_dir = dir.path().join("from_env");
    let out = bin()
        .args(["simulate", "--scenario"])
        .arg(&scenario)
        .env("PIPECLIMB_OUT", &out_dir)
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    assert!(out_dir.join("env_mu0_passive.csv").exists());
}

#[test]
fn validate_passes_on_bundled_references() {
    let out = bin().arg("validate").output().unwrap();
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("validation: PASS"), "{text}");
    // quoted APE column shows the published figures
    assert!(text.contains("1.2"), "{text}");
    assert!(text.contains("3.8"));
    assert!(text.contains("n/a"), "mu = 60 row is ungated: {text}");
}

#[test]
fn validate_rejects_corrupt_reference_file_with_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let refs = write(dir.path(), "refs.txt", "bend zero not numbers\n");
    let out = bin()
        .args(["validate", "--reference"])
        .arg(&refs)
        .output()
        .unwrap();
    assert_error_line(&out, 1);
}

#[test]
fn validate_fails_out_of_tolerance_references_with_exit_4() {
    let dir = tempfile::tempdir().unwrap();
    let refs = write(dir.path(), "refs.txt", "bend 0 20.0 80.0 80.0 1.2 gated\n");
    let out = bin()
        .args(["validate", "--reference"])
        .arg(&refs)
        .output()
        .unwrap();
    assert_error_line(&out, 4);
    assert!(stdout(&out).contains("validation: FAIL"));
}

#[test]
fn report_writes_plots_and_comparison_table() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "net.pipe", NETWORK);
    let scenario = write(
        dir.path(),
        "rep.scenario",
        "network net.pipe\nmu_deg 0\nmode passive\n",
    );
    let out_dir = dir.path().join("out");
    let out = bin()
        .args(["report", "--scenario"])
        .arg(&scenario)
        .arg("--out-dir")
        .arg(&out_dir)
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", stderr(&out));

    let svg_path = out_dir.join("rep_mu0_passive_speeds.svg");
    let svg = std::fs::read_to_string(&svg_path).unwrap();
    assert!(svg.starts_with("<svg"));
    assert!(svg.contains("polyline"));

    let text = std::fs::read_to_string(out_dir.join("rep_summary.txt")).unwrap();
    assert!(text.contains("rep_mu0_passive"), "{text}");
    // the mu = 0 bend comparison row with theoretical speeds
    assert!(text.contains("33.70"), "{text}");
    assert!(text.contains("58.51"));
}

#[test]
fn bundled_scenario_runs_from_the_repository() {
    let scenario =
        Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios/paper_network.scenario");
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["simulate", "--scenario"])
        .arg(&scenario)
        .arg("--out-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    assert!(dir.path().join("paper_network_mu0_passive.csv").exists());
    assert!(dir.path().join("paper_network_mu30_passive.csv").exists());
    assert!(dir.path().join("paper_network_mu60_passive.csv").exists());
    let text = stdout(&out);
    assert!(text.contains("paper_network_mu0_passive"), "{text}");
}
