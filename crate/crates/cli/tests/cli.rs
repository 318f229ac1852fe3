//! End-to-end checks of the `hblab` binary: output schemas, exit codes,
//! configuration precedence, and determinism.

use std::path::Path;
use std::process::{Command, Output};

fn hblab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hblab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = hblab(args);
    assert!(
        out.status.success(),
        "hblab {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf-8 output")
}

fn field<'a>(line: &'a str, header: &str, name: &str) -> &'a str {
    let index = header
        .trim_end()
        .split(',')
        .position(|column| column == name)
        .unwrap_or_else(|| panic!("column {name} in {header}"));
    line.split(',').nth(index).unwrap()
}

#[test]
fn tables_default_emits_the_preset_rows() {
    let text = stdout_of(&["tables", "--paper-match"]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "eta,r,q,p,p_e,equivocation,mutual_info");
    assert_eq!(lines.len(), 1 + 3 * 4);
    assert!(text.contains("0.125,40,7,0.1919,0.0289,"));
    assert!(text.contains("0.125,80,19,0.2084,0.0022,0.0225,0.9775"));
    assert!(text.contains("0.25,80,17,0.2201,0.0051,0.0465,0.9535"));
    // LF endings, no CR anywhere.
    assert!(!text.contains('\r'));
}

#[test]
fn tables_single_cell_collapses_to_the_caption_value() {
    let text = stdout_of(&[
        "tables",
        "--eta",
        "0.125",
        "--r",
        "40",
        "--q",
        "1",
        "--paper-match",
    ]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    let p = field(lines[1], lines[0], "p");
    let p_e = field(lines[1], lines[0], "p_e");
    assert_eq!(p, "0.1919");
    assert_eq!(p_e, "0.1919");
}

#[test]
fn tables_json_parses_and_mirrors_the_csv_fields() {
    let text = stdout_of(&["tables", "--format", "json"]);
    let rows: serde_json::Value = serde_json::from_str(&text).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 12);
    for row in rows {
        for key in ["eta", "r", "q", "p", "p_e", "equivocation", "mutual_info"] {
            assert!(row.get(key).is_some(), "missing {key}");
        }
        let p_e = row["p_e"].as_f64().unwrap();
        assert!(p_e.is_finite() && (0.0..=1.0).contains(&p_e));
    }
}

#[test]
fn surface_contains_the_reference_cells() {
    let text = stdout_of(&[
        "surface",
        "--eta-min",
        "0.125",
        "--eta-max",
        "0.25",
        "--eta-step",
        "0.125",
        "--r-min",
        "40",
        "--r-max",
        "80",
        "--r-step",
        "40",
        "--paper-match",
    ]);
    assert!(text.starts_with("eta,r,p\n"));
    assert!(text.contains("0.1250,40,0.1919"));
    assert!(text.contains("0.1250,80,0.2084"));
    assert!(text.contains("0.2500,80,0.2201"));
}

#[test]
fn attack_summary_counters_are_exact() {
    let text = stdout_of(&[
        "attack", "--k", "8", "--r", "16", "--eta", "0.125", "--q", "5", "--trials", "20",
        "--seed", "9",
    ]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    let auths: u64 = field(lines[1], lines[0], "auths_total").parse().unwrap();
    assert_eq!(auths, 20 * 2 * 8 * 5);
    let faults: u64 = field(lines[1], lines[0], "faults_total").parse().unwrap();
    assert!(faults >= 20 * 2 * 8);
    // Both per-bit predictions ride along.
    let pooled: f64 = field(lines[1], lines[0], "predicted_per_bit_error")
        .parse()
        .unwrap();
    let exact: f64 = field(lines[1], lines[0], "predicted_per_bit_error_exact")
        .parse()
        .unwrap();
    assert!(pooled > 0.0 && exact > pooled);
}

#[test]
fn auth_sim_reports_both_scenarios() {
    let text = stdout_of(&[
        "auth-sim", "--k", "8", "--r", "8", "--eta", "0.25", "--trials", "500", "--seed", "4",
    ]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("honest_rejection,500,"));
    assert!(lines[2].starts_with("corrupted_acceptance,500,"));
    let model: f64 = field(lines[2], lines[0], "model_rate").parse().unwrap();
    let exact: f64 = field(lines[2], lines[0], "exact_rate").parse().unwrap();
    assert!((model - 37.0 / 256.0).abs() < 1e-6);
    assert!((exact - model).abs() < 1e-9);
}

#[test]
fn identical_seeds_give_byte_identical_output() {
    let args = [
        "attack", "--k", "6", "--r", "12", "--eta", "0.25", "--q", "3", "--trials", "25",
        "--seed", "31",
    ];
    assert_eq!(hblab(&args).stdout, hblab(&args).stdout);

    let json_args = ["tables", "--format", "json", "--seed", "5"];
    assert_eq!(hblab(&json_args).stdout, hblab(&json_args).stdout);
}

#[test]
fn parallel_and_sequential_execution_agree() {
    let args = [
        "attack", "--k", "8", "--r", "16", "--eta", "0.125", "--q", "5", "--trials", "40",
        "--seed", "12",
    ];
    let parallel = hblab(&args);
    let sequential = Command::new(env!("CARGO_BIN_EXE_hblab"))
        .args(args)
        .env("RAYON_NUM_THREADS", "1")
        .output()
        .expect("binary runs");
    assert!(parallel.status.success() && sequential.status.success());
    assert_eq!(parallel.stdout, sequential.stdout);
}

#[test]
fn out_flag_writes_the_same_bytes_as_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tables.csv");
    let piped = stdout_of(&["leakage", "--eta", "0.25", "--r", "80", "--q", "17"]);
    let out = hblab(&[
        "leakage",
        "--eta",
        "0.25",
        "--r",
        "80",
        "--q",
        "17",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), piped);
}

#[test]
fn config_file_fills_gaps_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.conf");
    std::fs::write(
        &config,
        "eta = 0.25\nr = 80\nq = 17\nformat = csv # trailing comment\n",
    )
    .unwrap();

    // Config alone selects the custom single set.
    let from_config = stdout_of(&["tables", "--config", config.to_str().unwrap()]);
    let lines: Vec<&str> = from_config.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[1].starts_with("0.25,80,17,"));

    // An explicit flag overrides the config value.
    let overridden = stdout_of(&[
        "tables",
        "--config",
        config.to_str().unwrap(),
        "--q",
        "7",
    ]);
    assert!(overridden.lines().nth(1).unwrap().starts_with("0.25,80,7,"));
}

#[test]
fn usage_errors_exit_2_and_runtime_errors_exit_1() {
    let bad_eta = hblab(&["tables", "--eta", "0.9"]);
    assert_eq!(bad_eta.status.code(), Some(2));

    let bad_flag = hblab(&["tables", "--no-such-flag"]);
    assert_eq!(bad_flag.status.code(), Some(2));

    let bad_config = hblab(&["tables", "--config", "/does/not/exist.conf"]);
    assert_eq!(bad_config.status.code(), Some(2));

    let unwritable = hblab(&[
        "leakage",
        "--out",
        Path::new("/nonexistent-dir/x.csv").to_str().unwrap(),
    ]);
    assert_eq!(unwritable.status.code(), Some(1));
    assert!(!String::from_utf8_lossy(&unwritable.stderr).is_empty());
}

#[test]
fn even_query_counts_warn_on_stderr() {
    let out = hblab(&[
        "attack", "--k", "4", "--r", "8", "--eta", "0.25", "--q", "4", "--trials", "5",
        "--seed", "1",
    ]);
    assert!(out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("even"), "expected even-q warning, got: {stderr}");

    let odd = hblab(&[
        "attack", "--k", "4", "--r", "8", "--eta", "0.25", "--q", "5", "--trials", "5",
        "--seed", "1",
    ]);
    let stderr = String::from_utf8_lossy(&odd.stderr);
    assert!(!stderr.contains("even"));
}

#[test]
fn diagnostics_stay_off_stdout() {
    let out = hblab(&[
        "attack", "--k", "4", "--r", "8", "--eta", "0.25", "--q", "3", "--trials", "5",
        "--seed", "1",
    ]);
    let stdout = String::from_utf8_lossy(&out.stdout);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stdout.starts_with("k,r,eta,q,"));
    assert!(stderr.contains("attack campaign"));
    assert!(stderr.contains("elapsed") || stderr.contains('s'));
}
